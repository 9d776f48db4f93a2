#pragma once

// Mergeable binned statistics and the small regression toolbox shared by the
// impact estimators. Accumulators hold (count, sum, sum of squares) so
// per-day partials merge associatively; the pipeline folds them in canonical
// day order to keep results bit-identical across thread counts.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace metaforge {

struct BinAcc {
    int64_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double y) noexcept {
        ++n;
        sum += y;
        sum_sq += y * y;
    }
    void merge(const BinAcc& other) noexcept {
        n += other.n;
        sum += other.sum;
        sum_sq += other.sum_sq;
    }
    double mean() const noexcept { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
    // Sample variance; 0 for fewer than two observations.
    double variance() const noexcept {
        if (n < 2) return 0.0;
        const double m = mean();
        const double v = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
        return v > 0.0 ? v : 0.0;
    }
    double stddev() const noexcept;
    double se() const noexcept;  // stddev / sqrt(n)
};

class BinnedCurve {
public:
    enum class Spacing { Log, Linear };

    BinnedCurve() = default;
    BinnedCurve(Spacing spacing, double lo, double hi, int n_bins);

    static BinnedCurve log_spaced(double lo, double hi, int n_bins) {
        return {Spacing::Log, lo, hi, n_bins};
    }
    static BinnedCurve linear(double lo, double hi, int n_bins) {
        return {Spacing::Linear, lo, hi, n_bins};
    }

    // Returns false (and tallies) when x falls outside [lo, hi].
    bool add(double x, double y);

    // -1 when x is out of range; the top edge belongs to the last bin.
    int bin_index(double x) const;

    void merge(const BinnedCurve& other);  // throws on grid mismatch
    bool same_grid(const BinnedCurve& other) const;

    int size() const { return static_cast<int>(bins_.size()); }
    double lo(int i) const { return edges_[static_cast<size_t>(i)]; }
    double hi(int i) const { return edges_[static_cast<size_t>(i) + 1]; }
    double center(int i) const;  // geometric mean for log bins, midpoint otherwise
    const BinAcc& bin(int i) const { return bins_[static_cast<size_t>(i)]; }
    BinAcc& bin(int i) { return bins_[static_cast<size_t>(i)]; }
    Spacing spacing() const { return spacing_; }
    int64_t out_of_range() const { return out_of_range_; }
    int64_t total_count() const;

private:
    Spacing spacing_ = Spacing::Linear;
    std::vector<double> edges_;
    std::vector<BinAcc> bins_;
    int64_t out_of_range_ = 0;
};

// Weighted least squares of y on x with intercept.
struct LineFit {
    bool ok = false;
    std::string reason;
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    int n_points = 0;
};

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> weight);

// Weighted fit of y = c * x through the origin; returns (c, se).
struct OriginFit {
    bool ok = false;
    std::string reason;
    double coeff = 0.0;
    double coeff_se = 0.0;
    int n_points = 0;
};

OriginFit weighted_origin_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> weight);

// Minimizes a smooth one-parameter objective on [lo, hi]: coarse grid scan
// followed by golden-section refinement. Used by the decay fitter.
double minimize_scalar(double lo, double hi, int grid_points, double tol,
                       const std::function<double(double)>& objective);

}  // namespace metaforge
