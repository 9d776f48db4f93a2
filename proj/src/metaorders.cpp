#include "metaforge/metaorders.hpp"

#include <cmath>
#include <stdexcept>

namespace metaforge {

Metaorder metaorder_features(const DailyTape& tape, std::span<const uint32_t> children) {
    if (children.empty()) throw std::invalid_argument("metaorder_features: empty run");

    Metaorder mo;
    mo.sign = tape.signs[children.front()];
    mo.children.assign(children.begin(), children.end());

    double volume = 0.0;
    for (size_t k = 0; k < children.size(); ++k) {
        const uint32_t idx = children[k];
        if (k > 0 && idx <= children[k - 1])
            throw std::invalid_argument("metaorder_features: child indices not increasing");
        if (tape.signs[idx] != mo.sign)
            throw std::invalid_argument("metaorder_features: mixed signs in run");
        volume += tape.volumes[idx];
    }
    mo.volume = volume;

    const uint32_t first = children.front();
    const uint32_t last = children.back();
    mo.start_ts = tape.timestamps[first];
    mo.end_ts = tape.timestamps[last];
    mo.duration_s = static_cast<double>(mo.end_ts - mo.start_ts) / kNsPerSecond;
    mo.log_price_start = std::log(first > 0 ? tape.prices[first - 1] : tape.prices[first]);
    mo.log_price_end =
        std::log(last + 1 < tape.size() ? tape.prices[last + 1] : tape.prices[last]);
    return mo;
}

std::vector<Metaorder> build_metaorders(const DailyTape& tape, std::span<const uint32_t> labels,
                                        uint32_t n_traders, BuildStats* stats) {
    if (labels.size() != tape.size())
        throw std::invalid_argument("build_metaorders: labels do not align with tape");

    struct OpenRun {
        int8_t sign = 0;
        std::vector<uint32_t> children;
    };
    std::vector<OpenRun> open(n_traders);
    std::vector<Metaorder> out;
    BuildStats local;

    auto close_run = [&](uint32_t trader, OpenRun& run) {
        if (run.children.size() >= 2) {
            Metaorder mo = metaorder_features(tape, run.children);
            mo.trader = trader;
            out.push_back(std::move(mo));
            ++local.metaorders;
        } else if (run.children.size() == 1) {
            ++local.singletons_discarded;
        }
        run.children.clear();
    };

    // Single chronological pass; a sign flip inside a trader's subsequence
    // closes its run and opens a new one.
    for (uint32_t i = 0; i < tape.size(); ++i) {
        const uint32_t trader = labels[i];
        if (trader >= n_traders)
            throw std::invalid_argument("build_metaorders: label out of range");
        OpenRun& run = open[trader];
        const int8_t sign = tape.signs[i];
        if (!run.children.empty() && run.sign != sign) close_run(trader, run);
        if (run.children.empty()) run.sign = sign;
        run.children.push_back(i);
    }
    for (uint32_t trader = 0; trader < n_traders; ++trader) close_run(trader, open[trader]);

    if (stats) *stats = local;
    return out;
}

}  // namespace metaforge
