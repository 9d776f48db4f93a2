#include "metaforge/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "metaforge/rng.hpp"

namespace metaforge {

void FrequencyLaw::validate() const {
    if (kind == Kind::PowerLaw && !(alpha > 1.0))
        throw std::invalid_argument("FrequencyLaw: power-law alpha must be > 1");
}

std::string FrequencyLaw::name() const {
    if (kind == Kind::Homogeneous) return "homogeneous";
    return "powerlaw(" + std::to_string(alpha) + ")";
}

void MappingConfig::validate() const {
    if (n_traders < 1) throw std::invalid_argument("MappingConfig: n_traders must be >= 1");
    law.validate();
}

TraderAssignment draw_frequencies(const MappingConfig& config) {
    config.validate();
    const uint32_t n = config.n_traders;

    TraderAssignment out;
    out.frequencies.resize(n);
    Xoshiro256 rng(substream_seed(config.seed, SeedStream::Frequencies));
    if (config.law.kind == FrequencyLaw::Kind::Homogeneous) {
        std::fill(out.frequencies.begin(), out.frequencies.end(), 1.0);
    } else {
        const double inv_tail = 1.0 / (config.law.alpha - 1.0);
        for (auto& f : out.frequencies) f = std::pow(rng.uniform01_open_low(), -inv_tail);
    }

    double total = 0.0;
    for (double f : out.frequencies) total += f;
    out.probabilities.resize(n);
    for (uint32_t i = 0; i < n; ++i) out.probabilities[i] = out.frequencies[i] / total;

    out.cumulative.resize(n + 1);
    out.cumulative[0] = 0.0;
    for (uint32_t i = 0; i < n; ++i)
        out.cumulative[i + 1] = out.cumulative[i] + out.probabilities[i];
    out.cumulative[n] = 1.0;  // pin the top edge against rounding drift
    return out;
}

TraderAssignment assign_traders(const DailyTape& tape, const MappingConfig& config) {
    if (tape.empty()) throw std::invalid_argument("assign_traders: empty tape");
    TraderAssignment out = draw_frequencies(config);
    const uint32_t n = config.n_traders;

    out.labels.resize(tape.size());
    if (n == 1) {
        std::fill(out.labels.begin(), out.labels.end(), 0u);
        return out;
    }

    Xoshiro256 rng(substream_seed(config.seed, SeedStream::Assignment));
    const double* cum = out.cumulative.data();
    const double* cum_end = cum + n + 1;
    for (auto& label : out.labels) {
        const double u = rng.uniform01();  // u < 1 == cumulative[n]
        // trader i such that c_i <= u < c_{i+1}; zero-width bins are skipped
        const double* it = std::upper_bound(cum, cum_end, u);
        label = static_cast<uint32_t>(it - cum) - 1;
    }
    return out;
}

}  // namespace metaforge
