#include "metaforge/controls.hpp"

#include <cmath>
#include <stdexcept>

#include "metaforge/rng.hpp"

namespace metaforge {

DailyTape shuffle_signs(const DailyTape& tape, uint64_t seed) {
    if (tape.empty()) throw std::invalid_argument("shuffle_signs: empty tape");
    DailyTape out = tape;
    Xoshiro256 rng(substream_seed(seed, SeedStream::SignShuffle));
    deterministic_shuffle(out.signs, rng);
    out.finalize();
    return out;
}

DailyTape apply_chronology_permutation(const DailyTape& tape,
                                       std::span<const uint32_t> permutation) {
    const size_t n = tape.size();
    if (permutation.size() != n)
        throw std::invalid_argument("apply_chronology_permutation: length mismatch");

    std::vector<double> returns(n, 0.0);
    for (size_t k = 1; k < n; ++k)
        returns[k] = std::log(tape.prices[k]) - std::log(tape.prices[k - 1]);

    DailyTape out;
    out.symbol = tape.symbol;
    out.venue = tape.venue;
    out.date_days = tape.date_days;
    out.timestamps = tape.timestamps;  // the slot grid is kept
    out.prices.resize(n);
    out.volumes.resize(n);
    out.signs.resize(n);

    double log_price = std::log(tape.open_price());
    for (size_t j = 0; j < n; ++j) {
        const uint32_t src = permutation[j];
        if (src >= n) throw std::invalid_argument("apply_chronology_permutation: bad index");
        log_price += returns[src];
        out.prices[j] = std::exp(log_price);
        out.volumes[j] = tape.volumes[src];
        out.signs[j] = tape.signs[src];
    }
    out.finalize();
    return out;
}

DailyTape shuffle_chronology(const DailyTape& tape, uint64_t seed) {
    if (tape.empty()) throw std::invalid_argument("shuffle_chronology: empty tape");
    Xoshiro256 rng(substream_seed(seed, SeedStream::ChronoShuffle));
    const auto perm = random_permutation(tape.size(), rng);
    return apply_chronology_permutation(tape, perm);
}

}  // namespace metaforge
