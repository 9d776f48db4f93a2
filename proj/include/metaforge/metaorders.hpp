#pragma once

// Synthetic metaorder construction: cut each trader's label-restricted
// subsequence at every sign change and keep the maximal same-sign runs with
// at least two child orders.

#include <cstdint>
#include <span>
#include <vector>

#include "metaforge/types.hpp"

namespace metaforge {

struct Metaorder {
    uint32_t trader = 0;
    int8_t sign = 0;
    std::vector<uint32_t> children;  // tape indices, strictly increasing
    double volume = 0.0;             // Q, sum of child volumes
    int64_t start_ts = 0;            // timestamp of first child
    int64_t end_ts = 0;              // timestamp of last child
    double duration_s = 0.0;         // T = (end_ts - start_ts) in seconds
    double log_price_start = 0.0;    // log price just before the first child
    double log_price_end = 0.0;      // log price just after the last child

    uint32_t n_children() const { return static_cast<uint32_t>(children.size()); }
};

struct BuildStats {
    int64_t singletons_discarded = 0;
    int64_t metaorders = 0;
};

// Price conventions, matching the start/end mid-price definitions on a
// trade-only tape: the start price is the trade print immediately before the
// first child (the first child's own print at the day open), the end price is
// the print immediately after the last child (the last child's own print at
// the day close).
Metaorder metaorder_features(const DailyTape& tape, std::span<const uint32_t> children);

// Runs over the tape once; labels[i] is the trader of trade i. Runs with a
// single child are discarded and tallied.
std::vector<Metaorder> build_metaorders(const DailyTape& tape, std::span<const uint32_t> labels,
                                        uint32_t n_traders, BuildStats* stats = nullptr);

}  // namespace metaforge
