#pragma once

// Estimators for the stylized facts of metaorder impact: peak-impact curve
// with square-root-law fits, duration independence, within-execution profile,
// post-execution decay, and the child-count tail. All accumulators merge
// across days.

#include <optional>
#include <span>

#include "metaforge/metaorders.hpp"
#include "metaforge/stats.hpp"

namespace metaforge {

// Per-metaorder impact datum: eps * (log p_e - log p_s) / sigma_D.
inline double impact_datum(const Metaorder& mo, double sigma_d) {
    return static_cast<double>(mo.sign) * (mo.log_price_end - mo.log_price_start) / sigma_d;
}

// ---------------------------------------------------------------------------
// Peak impact: mean normalized impact binned in x = Q / V_D.
// ---------------------------------------------------------------------------
class ImpactAccumulator {
public:
    explicit ImpactAccumulator(BinnedCurve grid) : curve_(std::move(grid)) {}
    static ImpactAccumulator with_defaults() {
        return ImpactAccumulator(BinnedCurve::log_spaced(1e-6, 1e-1, 30));
    }

    void add_day(const DailyTape& tape, std::span<const Metaorder> metaorders);
    void merge(const ImpactAccumulator& other);

    const BinnedCurve& curve() const { return curve_; }
    int64_t skipped_zero_sigma() const { return skipped_zero_sigma_; }

private:
    BinnedCurve curve_;
    int64_t skipped_zero_sigma_ = 0;
};

struct FitRange {
    double lo = 5e-6;
    double hi = 1e-1;
};

struct SqrtFit {
    bool ok = false;
    std::string reason;
    double prefactor = 0.0;     // Y from mean = Y * sqrt(x), through the origin
    double prefactor_se = 0.0;
    double exponent = 0.0;      // delta from log mean = log A + delta * log x
    double exponent_se = 0.0;
    double amplitude = 0.0;     // A
    double fit_lo = 0.0;
    double fit_hi = 0.0;
    int bins_used = 0;
    int bins_skipped_nonpositive = 0;  // excluded from the log-log branch
};

// Both fits are weighted by 1/SE^2 over retained bins inside the range.
// Fewer than min_bins usable bins gives an explicit unfittable result.
SqrtFit fit_sqrt_law(const BinnedCurve& curve, FitRange range, int64_t min_count = 50,
                     int min_bins = 5);

// ---------------------------------------------------------------------------
// Duration independence: R = [eps * dlogp / sigma_D] / sqrt(Q / V_D) binned in
// the metaorder duration T. The bin counts double as the duration histogram.
// ---------------------------------------------------------------------------
class DurationRatioAccumulator {
public:
    explicit DurationRatioAccumulator(BinnedCurve grid) : curve_(std::move(grid)) {}
    static DurationRatioAccumulator with_defaults() {
        return DurationRatioAccumulator(BinnedCurve::log_spaced(1.0, 36000.0, 30));
    }

    void add_day(const DailyTape& tape, std::span<const Metaorder> metaorders);
    void merge(const DurationRatioAccumulator& other);

    const BinnedCurve& curve() const { return curve_; }
    int64_t skipped_zero_sigma() const { return skipped_zero_sigma_; }

private:
    BinnedCurve curve_;
    int64_t skipped_zero_sigma_ = 0;
};

// ---------------------------------------------------------------------------
// Execution profile: rescaled impact versus executed-volume fraction phi.
// Each path is normalized by the bin-mean peak impact of its (Q/V_D) bin (the
// per-metaorder endpoint is too noisy a normalizer), so the accumulator needs
// the finalized peak curve from a first pass.
// ---------------------------------------------------------------------------
class ProfileAccumulator {
public:
    ProfileAccumulator(int phi_bins, BinnedCurve peak_reference, int64_t peak_min_count,
                       uint32_t min_children = 5);

    void add_day(const DailyTape& tape, std::span<const Metaorder> metaorders);
    void merge(const ProfileAccumulator& other);

    const BinnedCurve& curve() const { return curve_; }
    int64_t skipped_no_reference() const { return skipped_no_reference_; }
    int64_t skipped_few_children() const { return skipped_few_children_; }

private:
    BinnedCurve curve_;  // linear in phi over [0, 1]
    BinnedCurve peak_reference_;
    int64_t peak_min_count_;
    uint32_t min_children_;
    int64_t skipped_no_reference_ = 0;
    int64_t skipped_few_children_ = 0;
};

// Regression of the profile means against sqrt(phi); slope 1 / intercept 0
// means the path follows its own square-root law exactly.
LineFit profile_sqrt_regression(const BinnedCurve& profile, int64_t min_count = 50);

// ---------------------------------------------------------------------------
// Post-execution decay in rescaled time z = t/T >= 1, t measured from the
// metaorder start. Each bin holds paired sums of (impact, peak impact); the
// bin estimate is the ratio of means, which keeps noisy near-zero peaks from
// blowing up individual paths. Bin z = 1 is an exact anchor: every metaorder
// contributes its peak against itself, so the first value is 1 by
// construction.
// ---------------------------------------------------------------------------
struct RatioAcc {
    int64_t n = 0;
    double sum_y = 0.0, sum_yy = 0.0;
    double sum_p = 0.0, sum_pp = 0.0;
    double sum_yp = 0.0;

    void add(double y, double p) noexcept {
        ++n;
        sum_y += y;
        sum_yy += y * y;
        sum_p += p;
        sum_pp += p * p;
        sum_yp += y * p;
    }
    void merge(const RatioAcc& other) noexcept {
        n += other.n;
        sum_y += other.sum_y;
        sum_yy += other.sum_yy;
        sum_p += other.sum_p;
        sum_pp += other.sum_pp;
        sum_yp += other.sum_yp;
    }
    double value() const noexcept { return sum_p != 0.0 ? sum_y / sum_p : 0.0; }
    double se() const noexcept;  // delta-method standard error of the ratio
};

struct DecayCurve {
    struct Bin {
        double z_lo = 0.0, z_hi = 0.0, z = 0.0;
        double value = 0.0;
        double se = 0.0;
        int64_t count = 0;
    };
    Bin anchor;             // z = 1 exactly
    std::vector<Bin> bins;  // log-spaced over (1, z_max]
};

class DecayAccumulator {
public:
    DecayAccumulator(double z_max = 10.0, int z_bins = 24, uint32_t min_children = 5);

    void add_day(const DailyTape& tape, std::span<const Metaorder> metaorders);
    void merge(const DecayAccumulator& other);

    DecayCurve finalize(int64_t min_count = 50) const;
    int64_t truncated_paths() const { return truncated_paths_; }
    int64_t skipped_zero_duration() const { return skipped_zero_duration_; }
    double z_max() const { return z_max_; }

private:
    double z_max_;
    uint32_t min_children_;
    std::vector<double> edges_;  // z edges over (1, z_max], log-spaced
    RatioAcc anchor_;
    std::vector<RatioAcc> bins_;
    int64_t truncated_paths_ = 0;       // day ended before z_max
    int64_t skipped_zero_duration_ = 0;
    int64_t skipped_zero_sigma_ = 0;
};

// Propagator decay shape of Eq-type z^(1-beta) - (z-1)^(1-beta); equals 1 at
// z = 1 for every beta.
double decay_shape(double z, double beta);

struct DecayFit {
    bool ok = false;
    std::string reason;
    double beta = 0.0;
    double beta_se = 0.0;
    // (1 - gamma) / 2 when gamma is supplied; the propagator-model value the
    // fitted beta should sit near.
    std::optional<double> propagator_beta;
    int bins_used = 0;
    double residual_rms = 0.0;
};

DecayFit fit_decay_beta(const DecayCurve& curve, std::optional<double> gamma = {},
                        int min_bins = 8);

// ---------------------------------------------------------------------------
// Child-count distribution and heavy-tail exponent.
// ---------------------------------------------------------------------------
struct PowerLawFit {
    bool ok = false;
    std::string reason;
    double exponent = 0.0;  // reported as 1 + mu for child counts
    double se = 0.0;        // (exponent - 1) / sqrt(n)
    double x_min = 0.0;
    int64_t n_used = 0;
};

// Hill-type maximum-likelihood exponent over samples >= x_min; discrete data
// uses the standard -1/2 continuity shift.
PowerLawFit fit_power_law(std::span<const double> samples, double x_min, bool discrete = false,
                          int64_t min_samples = 1000);

class ChildCountHistogram {
public:
    void add(uint32_t n_children);
    void merge(const ChildCountHistogram& other);

    const std::vector<int64_t>& counts() const { return counts_; }  // index = n_children
    int64_t total() const { return total_; }
    PowerLawFit fit_tail(double x_min, int64_t min_samples = 1000) const;

private:
    std::vector<int64_t> counts_;
    int64_t total_ = 0;
};

}  // namespace metaforge
