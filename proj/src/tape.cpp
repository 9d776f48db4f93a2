#include "metaforge/tape.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace metaforge {

std::string format_date(int32_t date_days) {
    const CivilDate c = civil_from_days(date_days);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", c.year, c.month, c.day);
    return buf;
}

void DailyTape::finalize() {
    const size_t n = size();
    if (prices.size() != n || volumes.size() != n || signs.size() != n)
        throw std::invalid_argument("DailyTape: column lengths differ");
    if (n == 0) throw std::invalid_argument("DailyTape: empty day");

    double sum_volume = 0.0;
    double max_price = prices[0];
    double min_price = prices[0];
    for (size_t i = 0; i < n; ++i) {
        if (i > 0 && timestamps[i] < timestamps[i - 1])
            throw std::invalid_argument("DailyTape: timestamps not non-decreasing");
        if (!(prices[i] > 0.0)) throw std::invalid_argument("DailyTape: price must be > 0");
        if (!(volumes[i] > 0.0)) throw std::invalid_argument("DailyTape: volume must be > 0");
        if (signs[i] != 1 && signs[i] != -1)
            throw std::invalid_argument("DailyTape: sign must be +1 or -1");
        sum_volume += volumes[i];
        max_price = std::max(max_price, prices[i]);
        min_price = std::min(min_price, prices[i]);
    }
    total_volume_ = sum_volume;
    open_price_ = prices[0];
    range_volatility_ = (max_price - min_price) / open_price_;
}

namespace {

[[noreturn]] void fail(size_t line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        const size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    for (auto& f : fields) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
        size_t i = 0;
        while (i < f.size() && f[i] == ' ') ++i;
        f.erase(0, i);
    }
    return fields;
}

bool parse_int(std::string_view s, int64_t& out) {
    if (s.empty()) return false;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

// Fixed digit-count field, advances the cursor.
bool take_digits(std::string_view s, size_t& pos, int count, int64_t& out) {
    if (pos + count > s.size()) return false;
    int64_t value = 0;
    for (int i = 0; i < count; ++i) {
        const char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    pos += count;
    out = value;
    return true;
}

}  // namespace

int64_t parse_timestamp(std::string_view text) {
    // Integer nanoseconds: digits only (optional leading sign).
    const bool looks_iso = text.size() >= 10 && text[4] == '-' && text[7] == '-';
    if (!looks_iso) {
        int64_t ns = 0;
        if (!parse_int(text, ns)) throw std::runtime_error("unrecognized timestamp format");
        return ns;
    }

    size_t pos = 0;
    int64_t year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!take_digits(text, pos, 4, year)) throw std::runtime_error("bad ISO-8601 date");
    ++pos;  // '-'
    if (!take_digits(text, pos, 2, month) || text[pos] != '-')
        throw std::runtime_error("bad ISO-8601 date");
    ++pos;
    if (!take_digits(text, pos, 2, day)) throw std::runtime_error("bad ISO-8601 date");
    if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' '))
        throw std::runtime_error("bad ISO-8601 separator");
    ++pos;
    if (!take_digits(text, pos, 2, hour) || pos >= text.size() || text[pos] != ':')
        throw std::runtime_error("bad ISO-8601 time");
    ++pos;
    if (!take_digits(text, pos, 2, minute) || pos >= text.size() || text[pos] != ':')
        throw std::runtime_error("bad ISO-8601 time");
    ++pos;
    if (!take_digits(text, pos, 2, second)) throw std::runtime_error("bad ISO-8601 time");
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        throw std::runtime_error("ISO-8601 field out of range");

    int64_t frac_ns = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        int digits = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9' && digits < 9) {
            frac_ns = frac_ns * 10 + (text[pos] - '0');
            ++pos;
            ++digits;
        }
        if (digits == 0) throw std::runtime_error("empty ISO-8601 fraction");
        for (int i = digits; i < 9; ++i) frac_ns *= 10;
    }

    int64_t offset_ns = 0;
    if (pos < text.size()) {
        const char c = text[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            const int64_t sign = (c == '+') ? 1 : -1;
            ++pos;
            int64_t oh = 0, om = 0;
            if (!take_digits(text, pos, 2, oh)) throw std::runtime_error("bad ISO-8601 offset");
            if (pos < text.size() && text[pos] == ':') ++pos;
            if (pos < text.size() && !take_digits(text, pos, 2, om))
                throw std::runtime_error("bad ISO-8601 offset");
            offset_ns = sign * (oh * 3600 + om * 60) * kNsPerSecond;
        }
        if (pos != text.size()) throw std::runtime_error("trailing characters in timestamp");
    }

    const int64_t days = days_from_civil(static_cast<int>(year), static_cast<unsigned>(month),
                                         static_cast<unsigned>(day));
    const int64_t tod = (hour * 3600 + minute * 60 + second) * kNsPerSecond + frac_ns;
    return days * kNsPerDay + tod - offset_ns;
}

std::vector<TradeRecord> parse_tape(std::istream& input, const ParseOptions& options,
                                    TapeFormat format) {
    if (format != TapeFormat::Csv) throw std::invalid_argument("unsupported tape format");

    std::string line;
    if (!std::getline(input, line)) throw std::runtime_error("line 1: missing CSV header");
    const auto header = split_csv_line(line);

    constexpr int kMissing = -1;
    int col_ts = kMissing, col_price = kMissing, col_volume = kMissing;
    int col_sign = kMissing, col_symbol = kMissing, col_venue = kMissing;
    for (size_t i = 0; i < header.size(); ++i) {
        const std::string name = lower(header[i]);
        const int idx = static_cast<int>(i);
        if (name == "timestamp") col_ts = idx;
        else if (name == "price") col_price = idx;
        else if (name == "volume" || name == "size" || name == "quantity") col_volume = idx;
        else if (name == "sign" || name == "side") col_sign = idx;
        else if (name == "symbol") col_symbol = idx;
        else if (name == "venue" || name == "exchange") col_venue = idx;
    }
    if (col_ts == kMissing) fail(1, "missing required column 'timestamp'");
    if (col_price == kMissing) fail(1, "missing required column 'price'");
    if (col_volume == kMissing) fail(1, "missing required column 'volume'");
    if (col_sign == kMissing && !options.allow_missing_sign)
        fail(1, "missing column 'sign' (pass --tick-rule to infer signs from prices)");
    if (col_symbol == kMissing && options.default_symbol.empty())
        fail(1, "missing column 'symbol' and no default symbol configured");

    std::vector<TradeRecord> records;
    size_t line_no = 1;
    while (std::getline(input, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        const auto field = [&](int col) -> const std::string& {
            static const std::string empty;
            if (col == kMissing || static_cast<size_t>(col) >= fields.size()) return empty;
            return fields[static_cast<size_t>(col)];
        };

        TradeRecord rec;
        try {
            rec.timestamp_ns = parse_timestamp(field(col_ts));
        } catch (const std::exception& e) {
            fail(line_no, std::string("timestamp: ") + e.what());
        }
        if (!parse_double(field(col_price), rec.price) || !(rec.price > 0.0) ||
            !std::isfinite(rec.price))
            fail(line_no, "price must be a positive finite number, got '" + field(col_price) + "'");
        if (!parse_double(field(col_volume), rec.volume) || !(rec.volume > 0.0) ||
            !std::isfinite(rec.volume))
            fail(line_no, "volume must be a positive finite number, got '" + field(col_volume) + "'");

        const std::string& sign_text = field(col_sign);
        if (sign_text.empty()) {
            if (!options.allow_missing_sign) fail(line_no, "empty sign");
            rec.sign = 0;
        } else {
            int64_t s = 0;
            if (!parse_int(sign_text, s) || (s != 1 && s != -1))
                fail(line_no, "sign must be +1 or -1, got '" + sign_text + "'");
            rec.sign = static_cast<int8_t>(s);
        }

        rec.symbol = col_symbol == kMissing ? options.default_symbol : field(col_symbol);
        if (rec.symbol.empty()) fail(line_no, "empty symbol");
        rec.venue = field(col_venue);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<TradeRecord> parse_tape_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return parse_tape(in, options);
}

void tick_rule_signs(std::span<TradeRecord> trades) {
    int8_t last_sign = 1;
    double last_price = trades.empty() ? 0.0 : trades[0].price;
    for (auto& t : trades) {
        if (t.price > last_price) last_sign = 1;
        else if (t.price < last_price) last_sign = -1;
        // zero tick keeps the previous sign; the first trade defaults to +1
        t.sign = last_sign;
        last_price = t.price;
    }
}

std::vector<DailyTape> clean_and_split(std::vector<TradeRecord> records,
                                       const SessionFilter& filter, CleanStats* stats) {
    filter.validate();
    CleanStats local;
    local.input_records = static_cast<int64_t>(records.size());

    for (const auto& r : records) {
        if (!r.symbol.empty() && r.symbol != records.front().symbol)
            throw std::invalid_argument("clean_and_split: records span multiple symbols (" +
                                        records.front().symbol + ", " + r.symbol + ")");
        if (r.sign != 1 && r.sign != -1)
            throw std::invalid_argument(
                "clean_and_split: unsigned trade; run tick_rule_signs first");
    }

    // Stable sort by (day, timestamp): equal timestamps keep input order, so
    // repeated runs are byte-identical.
    std::stable_sort(records.begin(), records.end(),
                     [](const TradeRecord& a, const TradeRecord& b) {
                         const int32_t da = date_from_timestamp(a.timestamp_ns);
                         const int32_t db = date_from_timestamp(b.timestamp_ns);
                         if (da != db) return da < db;
                         return a.timestamp_ns < b.timestamp_ns;
                     });

    std::vector<DailyTape> days;
    size_t i = 0;
    while (i < records.size()) {
        const int32_t date = date_from_timestamp(records[i].timestamp_ns);
        size_t j = i;
        while (j < records.size() && date_from_timestamp(records[j].timestamp_ns) == date) ++j;

        const int64_t day_start = static_cast<int64_t>(date) * kNsPerDay;
        const int64_t open = filter.session_open_ns ? day_start + *filter.session_open_ns
                                                    : records[i].timestamp_ns;
        const int64_t close = filter.session_close_ns ? day_start + *filter.session_close_ns
                                                      : records[j - 1].timestamp_ns;
        const int64_t lo = open + filter.trim_open_ns;
        const int64_t hi = close - filter.trim_close_ns;

        DailyTape tape;
        tape.symbol = records[i].symbol;
        tape.venue = records[i].venue;
        tape.date_days = date;
        for (size_t k = i; k < j; ++k) {
            const auto& r = records[k];
            if (r.timestamp_ns < lo || r.timestamp_ns > hi) {
                ++local.trades_trimmed;
                continue;
            }
            tape.timestamps.push_back(r.timestamp_ns);
            tape.prices.push_back(r.price);
            tape.volumes.push_back(r.volume);
            tape.signs.push_back(r.sign);
        }
        if (tape.size() < 2) {
            ++local.days_dropped;
        } else {
            tape.finalize();
            ++local.days_kept;
            days.push_back(std::move(tape));
        }
        i = j;
    }

    if (stats) *stats = local;
    return days;
}

void write_tape_csv(std::ostream& out, std::span<const DailyTape> days) {
    out << "timestamp,price,volume,sign,symbol,venue\n";
    char buf[128];
    for (const auto& day : days) {
        for (size_t i = 0; i < day.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%d,",
                          static_cast<long long>(day.timestamps[i]), day.prices[i],
                          day.volumes[i], static_cast<int>(day.signs[i]));
            out << buf << day.symbol << ',' << day.venue << '\n';
        }
    }
}

void write_tape_csv_file(const std::string& path, std::span<const DailyTape> days) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_tape_csv(out, days);
}

}  // namespace metaforge
