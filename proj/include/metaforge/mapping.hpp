#pragma once

// Random trader mapping: each trade of a day is independently assigned to one
// of N synthetic traders according to a drawn frequency profile. Chronology
// is never touched; the labels partition the tape.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "metaforge/types.hpp"

namespace metaforge {

struct FrequencyLaw {
    enum class Kind { Homogeneous, PowerLaw };
    Kind kind = Kind::Homogeneous;
    double alpha = 2.0;  // PowerLaw tail exponent, must be > 1

    void validate() const;
    std::string name() const;

    static FrequencyLaw homogeneous() { return {}; }
    static FrequencyLaw power_law(double alpha) { return {Kind::PowerLaw, alpha}; }
};

struct MappingConfig {
    uint32_t n_traders = 1;
    FrequencyLaw law;
    uint64_t seed = 0;  // day-level seed (see derive_day_seed)

    void validate() const;
};

struct TraderAssignment {
    std::vector<double> frequencies;    // f_i, N entries
    std::vector<double> probabilities;  // p_i = f_i / sum f_j
    std::vector<double> cumulative;     // c_0 = 0 ... c_N = 1, non-decreasing
    std::vector<uint32_t> labels;       // one trader id per trade

    uint32_t n_traders() const { return static_cast<uint32_t>(frequencies.size()); }
};

// Draws the frequency profile only (labels left empty). Homogeneous puts
// f == 1 for everyone; PowerLaw(alpha) draws f = U^(-1/(alpha-1)), the
// inverse CDF of a unit-scale Pareto whose scale cancels in normalization.
TraderAssignment draw_frequencies(const MappingConfig& config);

// Full mapping: frequency profile plus one label per trade with
// P(trader i) = p_i, independent across trades, deterministic given seed.
TraderAssignment assign_traders(const DailyTape& tape, const MappingConfig& config);

}  // namespace metaforge
