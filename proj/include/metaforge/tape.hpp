#pragma once

// Tape ingestion: CSV parsing, aggressor-sign fallback, session cleaning and
// day splitting with the per-day normalizers (V_D, sigma_D, p_0).

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "metaforge/types.hpp"

namespace metaforge {

enum class TapeFormat { Csv };

struct ParseOptions {
    // When true a missing/empty sign column yields sign = 0 for later
    // tick-rule inference instead of a parse error.
    bool allow_missing_sign = false;
    std::string default_symbol;  // used when the file has no symbol column
};

// Strict CSV reader. Required columns: timestamp, price, volume, sign
// (optional under allow_missing_sign), symbol (optional if default_symbol
// given), venue (always optional). Timestamps are ISO-8601 with offset or
// integer nanoseconds since epoch, auto-detected from the first data row.
// Malformed rows throw with the 1-based line number. Row order is preserved;
// ordering is enforced later by clean_and_split.
std::vector<TradeRecord> parse_tape(std::istream& input, const ParseOptions& options = {},
                                    TapeFormat format = TapeFormat::Csv);
std::vector<TradeRecord> parse_tape_file(const std::string& path,
                                         const ParseOptions& options = {});

// Timestamp parser used by parse_tape; exposed for tests and tools.
int64_t parse_timestamp(std::string_view text);

// Fallback when the tape lacks aggressor flags: +1 on an uptick, -1 on a
// downtick, previous sign on a zero tick, +1 for the first trade.
void tick_rule_signs(std::span<TradeRecord> trades);

struct CleanStats {
    int64_t days_kept = 0;
    int64_t days_dropped = 0;         // fewer than 2 trades after cleaning
    int64_t trades_trimmed = 0;       // fell outside the session window
    int64_t input_records = 0;
};

// Groups records of one symbol by UTC calendar day, stably sorts each day by
// timestamp (ties keep input order), removes the opening/closing periods and
// computes the per-day normalizers. Days with fewer than 2 surviving trades
// are dropped and counted.
std::vector<DailyTape> clean_and_split(std::vector<TradeRecord> records,
                                       const SessionFilter& filter = {},
                                       CleanStats* stats = nullptr);

// Writes the standard tape CSV (integer-ns timestamps) consumed by parse_tape.
void write_tape_csv(std::ostream& out, std::span<const DailyTape> days);
void write_tape_csv_file(const std::string& path, std::span<const DailyTape> days);

}  // namespace metaforge
