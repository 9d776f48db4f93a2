#include "metaforge/impact.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metaforge {

void ImpactAccumulator::add_day(const DailyTape& tape, std::span<const Metaorder> metaorders) {
    const double sigma = tape.range_volatility();
    if (!(sigma > 0.0)) {
        skipped_zero_sigma_ += static_cast<int64_t>(metaorders.size());
        return;
    }
    const double v_d = tape.total_volume();
    for (const auto& mo : metaorders) curve_.add(mo.volume / v_d, impact_datum(mo, sigma));
}

void ImpactAccumulator::merge(const ImpactAccumulator& other) {
    curve_.merge(other.curve_);
    skipped_zero_sigma_ += other.skipped_zero_sigma_;
}

SqrtFit fit_sqrt_law(const BinnedCurve& curve, FitRange range, int64_t min_count, int min_bins) {
    SqrtFit fit;
    fit.fit_lo = range.lo;
    fit.fit_hi = range.hi;

    std::vector<double> sqrt_x, mean, w;         // pinned-exponent branch
    std::vector<double> log_x, log_mean, log_w;  // free-exponent branch
    for (int i = 0; i < curve.size(); ++i) {
        const BinAcc& b = curve.bin(i);
        const double x = curve.center(i);
        if (x < range.lo || x > range.hi || b.n < min_count) continue;
        const double se = b.se();
        if (!(se > 0.0)) continue;
        const double m = b.mean();
        sqrt_x.push_back(std::sqrt(x));
        mean.push_back(m);
        w.push_back(1.0 / (se * se));
        if (m > 0.0) {
            log_x.push_back(std::log(x));
            log_mean.push_back(std::log(m));
            const double rel = se / m;
            log_w.push_back(1.0 / (rel * rel));
        } else {
            ++fit.bins_skipped_nonpositive;
        }
    }

    if (static_cast<int>(sqrt_x.size()) < min_bins) {
        fit.reason = "unfittable: " + std::to_string(sqrt_x.size()) + " usable bins in range, need " +
                     std::to_string(min_bins);
        return fit;
    }
    fit.bins_used = static_cast<int>(sqrt_x.size());

    const OriginFit pinned = weighted_origin_fit(sqrt_x, mean, w);
    if (!pinned.ok) {
        fit.reason = "pinned-exponent fit failed: " + pinned.reason;
        return fit;
    }
    fit.prefactor = pinned.coeff;
    fit.prefactor_se = pinned.coeff_se;

    if (static_cast<int>(log_x.size()) < min_bins) {
        fit.reason = "unfittable: only " + std::to_string(log_x.size()) +
                     " bins with positive mean for the free-exponent fit";
        return fit;
    }
    const LineFit loglog = weighted_line_fit(log_x, log_mean, log_w);
    if (!loglog.ok) {
        fit.reason = "free-exponent fit failed: " + loglog.reason;
        return fit;
    }
    fit.exponent = loglog.slope;
    fit.exponent_se = loglog.slope_se;
    fit.amplitude = std::exp(loglog.intercept);
    fit.ok = true;
    return fit;
}

void DurationRatioAccumulator::add_day(const DailyTape& tape,
                                       std::span<const Metaorder> metaorders) {
    const double sigma = tape.range_volatility();
    if (!(sigma > 0.0)) {
        skipped_zero_sigma_ += static_cast<int64_t>(metaorders.size());
        return;
    }
    const double v_d = tape.total_volume();
    for (const auto& mo : metaorders) {
        const double x = mo.volume / v_d;
        if (!(x > 0.0)) continue;
        curve_.add(mo.duration_s, impact_datum(mo, sigma) / std::sqrt(x));
    }
}

void DurationRatioAccumulator::merge(const DurationRatioAccumulator& other) {
    curve_.merge(other.curve_);
    skipped_zero_sigma_ += other.skipped_zero_sigma_;
}

ProfileAccumulator::ProfileAccumulator(int phi_bins, BinnedCurve peak_reference,
                                       int64_t peak_min_count, uint32_t min_children)
    : curve_(BinnedCurve::linear(0.0, 1.0, phi_bins)),
      peak_reference_(std::move(peak_reference)),
      peak_min_count_(peak_min_count),
      min_children_(min_children) {}

void ProfileAccumulator::add_day(const DailyTape& tape, std::span<const Metaorder> metaorders) {
    const double sigma = tape.range_volatility();
    if (!(sigma > 0.0)) return;
    const double v_d = tape.total_volume();

    for (const auto& mo : metaorders) {
        if (mo.n_children() < min_children_) {
            ++skipped_few_children_;
            continue;
        }
        const int ref_bin = peak_reference_.bin_index(mo.volume / v_d);
        if (ref_bin < 0 || peak_reference_.bin(ref_bin).n < peak_min_count_ ||
            !(peak_reference_.bin(ref_bin).mean() > 0.0)) {
            ++skipped_no_reference_;
            continue;
        }
        const double norm = peak_reference_.bin(ref_bin).mean();

        double cum_volume = 0.0;
        for (const uint32_t idx : mo.children) {
            cum_volume += tape.volumes[idx];
            const double phi = cum_volume / mo.volume;
            const double y = static_cast<double>(mo.sign) *
                             (std::log(tape.prices[idx]) - mo.log_price_start) / sigma;
            curve_.add(phi, y / norm);
        }
    }
}

void ProfileAccumulator::merge(const ProfileAccumulator& other) {
    curve_.merge(other.curve_);
    skipped_no_reference_ += other.skipped_no_reference_;
    skipped_few_children_ += other.skipped_few_children_;
}

LineFit profile_sqrt_regression(const BinnedCurve& profile, int64_t min_count) {
    std::vector<double> sqrt_phi, mean, w;
    for (int i = 0; i < profile.size(); ++i) {
        const BinAcc& b = profile.bin(i);
        if (b.n < min_count) continue;
        const double se = b.se();
        sqrt_phi.push_back(std::sqrt(profile.center(i)));
        mean.push_back(b.mean());
        w.push_back(se > 0.0 ? 1.0 / (se * se) : 1.0);
    }
    return weighted_line_fit(sqrt_phi, mean, w);
}

double RatioAcc::se() const noexcept {
    if (n < 2 || sum_p == 0.0) return 0.0;
    const double nn = static_cast<double>(n);
    const double mean_y = sum_y / nn;
    const double mean_p = sum_p / nn;
    if (mean_p == 0.0) return 0.0;
    const double r = mean_y / mean_p;
    const double var_y = std::max(0.0, (sum_yy - nn * mean_y * mean_y) / (nn - 1.0));
    const double var_p = std::max(0.0, (sum_pp - nn * mean_p * mean_p) / (nn - 1.0));
    const double cov = (sum_yp - nn * mean_y * mean_p) / (nn - 1.0);
    const double var_r = (var_y + r * r * var_p - 2.0 * r * cov) / (nn * mean_p * mean_p);
    return var_r > 0.0 ? std::sqrt(var_r) : 0.0;
}

DecayAccumulator::DecayAccumulator(double z_max, int z_bins, uint32_t min_children)
    : z_max_(z_max), min_children_(min_children) {
    if (!(z_max > 1.0)) throw std::invalid_argument("DecayAccumulator: z_max must be > 1");
    if (z_bins < 1) throw std::invalid_argument("DecayAccumulator: need at least one z bin");
    edges_.resize(static_cast<size_t>(z_bins) + 1);
    for (int i = 0; i <= z_bins; ++i)
        edges_[static_cast<size_t>(i)] = std::pow(z_max, static_cast<double>(i) / z_bins);
    edges_.front() = 1.0;
    edges_.back() = z_max;
    bins_.resize(static_cast<size_t>(z_bins));
}

void DecayAccumulator::add_day(const DailyTape& tape, std::span<const Metaorder> metaorders) {
    const double sigma = tape.range_volatility();
    if (!(sigma > 0.0)) {
        skipped_zero_sigma_ += static_cast<int64_t>(metaorders.size());
        return;
    }
    for (const auto& mo : metaorders) {
        if (mo.n_children() < min_children_) continue;
        if (!(mo.duration_s > 0.0)) {
            ++skipped_zero_duration_;
            continue;
        }
        const double peak = impact_datum(mo, sigma);
        anchor_.add(peak, peak);  // z = 1 by definition of the rescaled clock

        const double t_span = static_cast<double>(mo.end_ts - mo.start_ts);
        const int64_t horizon = mo.start_ts + static_cast<int64_t>(z_max_ * t_span);
        bool reached_horizon = false;
        for (size_t j = mo.children.back() + 1; j < tape.size(); ++j) {
            if (tape.timestamps[j] > horizon) {
                reached_horizon = true;
                break;
            }
            const double z = static_cast<double>(tape.timestamps[j] - mo.start_ts) / t_span;
            auto it = std::upper_bound(edges_.begin(), edges_.end(), z);
            int idx = static_cast<int>(it - edges_.begin()) - 1;
            if (idx < 0) idx = 0;  // ties at z == 1 fall into the first bin
            if (idx >= static_cast<int>(bins_.size())) idx = static_cast<int>(bins_.size()) - 1;
            const double y = static_cast<double>(mo.sign) *
                             (std::log(tape.prices[j]) - mo.log_price_start) / sigma;
            bins_[static_cast<size_t>(idx)].add(y, peak);
        }
        if (!reached_horizon) ++truncated_paths_;
    }
}

void DecayAccumulator::merge(const DecayAccumulator& other) {
    if (edges_ != other.edges_)
        throw std::invalid_argument("DecayAccumulator::merge: z grids differ");
    anchor_.merge(other.anchor_);
    for (size_t i = 0; i < bins_.size(); ++i) bins_[i].merge(other.bins_[i]);
    truncated_paths_ += other.truncated_paths_;
    skipped_zero_duration_ += other.skipped_zero_duration_;
    skipped_zero_sigma_ += other.skipped_zero_sigma_;
}

DecayCurve DecayAccumulator::finalize(int64_t min_count) const {
    DecayCurve curve;
    curve.anchor = {1.0, 1.0, 1.0, anchor_.value(), anchor_.se(), anchor_.n};
    for (size_t i = 0; i < bins_.size(); ++i) {
        const RatioAcc& b = bins_[i];
        if (b.n < min_count) continue;
        DecayCurve::Bin out;
        out.z_lo = edges_[i];
        out.z_hi = edges_[i + 1];
        out.z = std::sqrt(edges_[i] * edges_[i + 1]);
        out.value = b.value();
        out.se = b.se();
        out.count = b.n;
        curve.bins.push_back(out);
    }
    return curve;
}

double decay_shape(double z, double beta) {
    const double zm1 = std::max(0.0, z - 1.0);
    return std::pow(z, 1.0 - beta) - std::pow(zm1, 1.0 - beta);
}

namespace {
double decay_shape_dbeta(double z, double beta) {
    // d/dbeta [z^(1-b) - (z-1)^(1-b)]
    const double zm1 = z - 1.0;
    double d = -std::pow(z, 1.0 - beta) * std::log(z);
    if (zm1 > 0.0) d += std::pow(zm1, 1.0 - beta) * std::log(zm1);
    return d;
}
}  // namespace

DecayFit fit_decay_beta(const DecayCurve& curve, std::optional<double> gamma, int min_bins) {
    DecayFit fit;
    if (gamma) fit.propagator_beta = 0.5 * (1.0 - *gamma);

    std::vector<double> z, value, w;
    for (const auto& b : curve.bins) {
        z.push_back(b.z);
        value.push_back(b.value);
        const double se = std::max(b.se, 1e-12);
        w.push_back(1.0 / (se * se));
    }
    fit.bins_used = static_cast<int>(z.size());
    if (fit.bins_used < min_bins) {
        fit.reason = "unfittable: " + std::to_string(z.size()) + " populated z bins, need " +
                     std::to_string(min_bins);
        return fit;
    }

    const auto sse = [&](double beta) {
        double total = 0.0;
        for (size_t i = 0; i < z.size(); ++i) {
            const double r = value[i] - decay_shape(z[i], beta);
            total += w[i] * r * r;
        }
        return total;
    };
    const double beta = minimize_scalar(1e-4, 1.0 - 1e-4, 512, 1e-12, sse);
    const double sse_min = sse(beta);

    // Diverged fits (flat objective, boundary solutions) are reported, not
    // silently returned.
    if (!(beta > 1e-4) || !(beta < 1.0 - 1e-4) || !std::isfinite(sse_min)) {
        fit.beta = beta;
        fit.reason = "non-convergence: boundary solution at beta = " + std::to_string(beta) +
                     ", weighted SSE = " + std::to_string(sse_min);
        return fit;
    }

    double jtj = 0.0;
    for (size_t i = 0; i < z.size(); ++i) {
        const double j = decay_shape_dbeta(z[i], beta);
        jtj += w[i] * j * j;
    }
    const double dof = std::max(1.0, static_cast<double>(z.size()) - 1.0);
    fit.beta = beta;
    fit.beta_se = jtj > 0.0 ? std::sqrt((sse_min / dof) / jtj) : 0.0;
    fit.residual_rms = std::sqrt(sse_min / static_cast<double>(z.size()));
    fit.ok = true;
    return fit;
}

PowerLawFit fit_power_law(std::span<const double> samples, double x_min, bool discrete,
                          int64_t min_samples) {
    PowerLawFit fit;
    fit.x_min = x_min;
    if (!(x_min > 0.0)) {
        fit.reason = "x_min must be positive";
        return fit;
    }
    const double ref = discrete ? x_min - 0.5 : x_min;
    double log_sum = 0.0;
    int64_t n = 0;
    for (const double x : samples) {
        if (x < x_min) continue;
        log_sum += std::log(x / ref);
        ++n;
    }
    fit.n_used = n;
    if (n < min_samples) {
        fit.reason = "too few samples >= x_min: " + std::to_string(n) + " < " +
                     std::to_string(min_samples);
        return fit;
    }
    if (!(log_sum > 0.0)) {
        fit.reason = "degenerate sample (all values at x_min)";
        return fit;
    }
    fit.exponent = 1.0 + static_cast<double>(n) / log_sum;
    fit.se = (fit.exponent - 1.0) / std::sqrt(static_cast<double>(n));
    fit.ok = true;
    return fit;
}

void ChildCountHistogram::add(uint32_t n_children) {
    if (counts_.size() <= n_children) counts_.resize(n_children + 1, 0);
    ++counts_[n_children];
    ++total_;
}

void ChildCountHistogram::merge(const ChildCountHistogram& other) {
    if (counts_.size() < other.counts_.size()) counts_.resize(other.counts_.size(), 0);
    for (size_t i = 0; i < other.counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
}

PowerLawFit ChildCountHistogram::fit_tail(double x_min, int64_t min_samples) const {
    PowerLawFit fit;
    fit.x_min = x_min;
    const double ref = x_min - 0.5;
    if (!(ref > 0.0)) {
        fit.reason = "x_min too small for discrete fit";
        return fit;
    }
    double log_sum = 0.0;
    int64_t n = 0;
    for (size_t k = 0; k < counts_.size(); ++k) {
        if (static_cast<double>(k) < x_min || counts_[k] == 0) continue;
        log_sum += static_cast<double>(counts_[k]) * std::log(static_cast<double>(k) / ref);
        n += counts_[k];
    }
    fit.n_used = n;
    if (n < min_samples) {
        fit.reason = "too few samples >= x_min: " + std::to_string(n) + " < " +
                     std::to_string(min_samples);
        return fit;
    }
    if (!(log_sum > 0.0)) {
        fit.reason = "degenerate sample (all values at x_min)";
        return fit;
    }
    fit.exponent = 1.0 + static_cast<double>(n) / log_sum;
    fit.se = (fit.exponent - 1.0) / std::sqrt(static_cast<double>(n));
    fit.ok = true;
    return fit;
}

}  // namespace metaforge
