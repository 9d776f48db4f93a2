#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace metaforge {

constexpr int64_t kNsPerSecond = 1'000'000'000LL;
constexpr int64_t kNsPerDay = 86'400LL * kNsPerSecond;

// Howard Hinnant's civil-date algorithms (public domain).
constexpr int64_t days_from_civil(int y, unsigned m, unsigned d) noexcept {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<int64_t>(era) * 146097 + static_cast<int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    unsigned month;
    unsigned day;
};

constexpr CivilDate civil_from_days(int64_t z) noexcept {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t y = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), m, d};
}

inline int32_t date_from_timestamp(int64_t timestamp_ns) noexcept {
    // Floor division; pre-epoch timestamps land on the correct civil day.
    int64_t days = timestamp_ns / kNsPerDay;
    if (timestamp_ns % kNsPerDay < 0) --days;
    return static_cast<int32_t>(days);
}

std::string format_date(int32_t date_days);

// One executed trade as it appears on the public tape. sign follows the
// aggressor convention: +1 buyer-initiated, -1 seller-initiated, 0 unknown
// (only allowed transiently before tick_rule_signs fills it in).
struct TradeRecord {
    int64_t timestamp_ns = 0;
    double price = 0.0;
    double volume = 0.0;
    int8_t sign = 0;
    std::string symbol;
    std::string venue;
};

// Which part of the trading day survives cleaning. Times of day are
// nanoseconds since UTC midnight; when unset the session bounds default to
// the day's first and last trade. The trim windows drop the opening and
// closing periods (auctions, fixing prints).
struct SessionFilter {
    std::optional<int64_t> session_open_ns;
    std::optional<int64_t> session_close_ns;
    int64_t trim_open_ns = 600 * kNsPerSecond;
    int64_t trim_close_ns = 600 * kNsPerSecond;

    void validate() const {
        if (trim_open_ns < 0 || trim_close_ns < 0)
            throw std::invalid_argument("SessionFilter: trim windows must be non-negative");
        if (session_open_ns && session_close_ns && *session_open_ns >= *session_close_ns)
            throw std::invalid_argument("SessionFilter: session open must precede close");
    }
};

// One cleaned, chronologically ordered symbol-day. Stored column-wise: the
// estimators stream through millions of trades and only ever touch a couple
// of fields at a time.
class DailyTape {
public:
    std::string symbol;
    std::string venue;
    int32_t date_days = 0;
    std::vector<int64_t> timestamps;
    std::vector<double> prices;
    std::vector<double> volumes;
    std::vector<int8_t> signs;

    size_t size() const noexcept { return timestamps.size(); }
    bool empty() const noexcept { return timestamps.empty(); }

    double total_volume() const noexcept { return total_volume_; }      // V_D
    double range_volatility() const noexcept { return range_volatility_; }  // sigma_D
    double open_price() const noexcept { return open_price_; }          // p_0

    std::string date_string() const { return format_date(date_days); }

    TradeRecord trade(size_t i) const {
        return TradeRecord{timestamps[i], prices[i], volumes[i], signs[i], symbol, venue};
    }

    // Recomputes V_D, sigma_D, p_0 from the columns and checks the ordering
    // and sign invariants. Call after any mutation of the columns.
    void finalize();

private:
    double total_volume_ = 0.0;
    double range_volatility_ = 0.0;
    double open_price_ = 0.0;
};

}  // namespace metaforge
