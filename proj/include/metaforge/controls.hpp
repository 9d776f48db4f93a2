#pragma once

// Negative controls: destroy one specific piece of information on the tape
// and verify downstream that the impact signal reacts the way it should.

#include <cstdint>
#include <span>

#include "metaforge/types.hpp"

namespace metaforge {

// Replaces the sign column by a uniform random permutation of itself. Prices,
// volumes and timestamps are untouched, so V_D, sigma_D and p_0 are preserved
// bitwise.
DailyTape shuffle_signs(const DailyTape& tape, uint64_t seed);

// Rebuilds the day from a permutation of (trade, own log-return) pairs: trade
// k keeps its return r_k = log p_k - log p_(k-1) (r_0 = 0), its sign and its
// volume, but executes in a different slot of the original timestamp grid.
// The price path is re-cumulated from the original p_0, so the return
// multiset and the day's total log return are invariant.
DailyTape shuffle_chronology(const DailyTape& tape, uint64_t seed);

// Deterministic core of shuffle_chronology; permutation[j] is the original
// index of the trade executing in slot j. Exposed so property tests can drive
// it with hand-picked permutations (identity reproduces the tape exactly).
DailyTape apply_chronology_permutation(const DailyTape& tape,
                                       std::span<const uint32_t> permutation);

}  // namespace metaforge
