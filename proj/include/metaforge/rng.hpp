#pragma once

// Deterministic randomness. Every stochastic step in the pipeline draws from
// xoshiro256** seeded through splitmix64, so identical (input, seed) pairs
// give identical output bytes regardless of platform or standard library.

#include <cstdint>
#include <string_view>
#include <vector>

namespace metaforge {

inline uint64_t splitmix64(uint64_t& state) noexcept {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** (Blackman & Vigna, public domain reference implementation).
class Xoshiro256 {
public:
    using result_type = uint64_t;

    explicit Xoshiro256(uint64_t seed = 0) noexcept {
        uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static constexpr uint64_t min() noexcept { return 0; }
    static constexpr uint64_t max() noexcept { return ~0ULL; }

    uint64_t operator()() noexcept { return next(); }

    uint64_t next() noexcept {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 significant bits.
    double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1]; safe as a power-law base.
    double uniform01_open_low() noexcept { return 1.0 - uniform01(); }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n) (Lemire's multiply-shift with rejection).
    uint64_t bounded(uint64_t n) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<uint64_t>(m);
        if (lo < n) {
            const uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    // Fair coin mapped to {+1, -1}.
    int8_t coin_sign() noexcept { return (next() >> 63) ? int8_t{1} : int8_t{-1}; }

private:
    static constexpr uint64_t rotl(uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }
    uint64_t state_[4];
};

// FNV-1a, used for seed derivation and output-file fingerprints.
inline uint64_t fnv1a(std::string_view bytes, uint64_t h = 0xcbf29ce484222325ULL) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) noexcept {
    uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

// Independent sub-streams carved from one day-level seed.
enum class SeedStream : uint64_t {
    Frequencies = 0x66726571,
    Assignment = 0x61736767,
    SignShuffle = 0x7369676e,
    ChronoShuffle = 0x6368726f,
    Synthetic = 0x73796e74,
};

inline uint64_t substream_seed(uint64_t seed, SeedStream stream) noexcept {
    return mix_seed(seed, static_cast<uint64_t>(stream));
}

// Day-level seed: depends on the master seed and the (symbol, date) key only,
// never on scheduling, so batch runs are reproducible under any thread count.
inline uint64_t derive_day_seed(uint64_t master_seed, std::string_view symbol,
                                int32_t date_days) noexcept {
    uint64_t h = fnv1a(symbol);
    h = mix_seed(h, static_cast<uint64_t>(static_cast<int64_t>(date_days)));
    return mix_seed(master_seed, h);
}

// In-place Fisher-Yates; identical seeds give identical permutations.
template <typename T>
void deterministic_shuffle(std::vector<T>& values, Xoshiro256& rng) {
    for (size_t i = values.size(); i > 1; --i) {
        const size_t j = static_cast<size_t>(rng.bounded(i));
        std::swap(values[i - 1], values[j]);
    }
}

inline std::vector<uint32_t> random_permutation(size_t n, Xoshiro256& rng) {
    std::vector<uint32_t> perm(n);
    for (size_t i = 0; i < n; ++i) perm[i] = static_cast<uint32_t>(i);
    deterministic_shuffle(perm, rng);
    return perm;
}

}  // namespace metaforge
