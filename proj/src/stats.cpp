#include "metaforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace metaforge {

double BinAcc::stddev() const noexcept { return std::sqrt(variance()); }

double BinAcc::se() const noexcept {
    return n > 0 ? stddev() / std::sqrt(static_cast<double>(n)) : 0.0;
}

BinnedCurve::BinnedCurve(Spacing spacing, double lo, double hi, int n_bins) : spacing_(spacing) {
    if (!(lo < hi)) throw std::invalid_argument("BinnedCurve: lo must be < hi");
    if (n_bins < 1) throw std::invalid_argument("BinnedCurve: need at least one bin");
    if (spacing == Spacing::Log && !(lo > 0.0))
        throw std::invalid_argument("BinnedCurve: log spacing needs lo > 0");

    edges_.resize(static_cast<size_t>(n_bins) + 1);
    if (spacing == Spacing::Log) {
        const double llo = std::log(lo);
        const double lhi = std::log(hi);
        for (int i = 0; i <= n_bins; ++i)
            edges_[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * i / n_bins);
    } else {
        for (int i = 0; i <= n_bins; ++i)
            edges_[static_cast<size_t>(i)] = lo + (hi - lo) * i / n_bins;
    }
    edges_.front() = lo;
    edges_.back() = hi;
    bins_.resize(static_cast<size_t>(n_bins));
}

int BinnedCurve::bin_index(double x) const {
    if (!(x >= edges_.front()) || !(x <= edges_.back())) return -1;
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    int idx = static_cast<int>(it - edges_.begin()) - 1;
    if (idx == size()) --idx;  // top edge belongs to the last bin
    return idx;
}

bool BinnedCurve::add(double x, double y) {
    const int idx = bin_index(x);
    if (idx < 0) {
        ++out_of_range_;
        return false;
    }
    bins_[static_cast<size_t>(idx)].add(y);
    return true;
}

bool BinnedCurve::same_grid(const BinnedCurve& other) const {
    return spacing_ == other.spacing_ && edges_ == other.edges_;
}

void BinnedCurve::merge(const BinnedCurve& other) {
    if (!same_grid(other)) throw std::invalid_argument("BinnedCurve::merge: bin grids differ");
    for (size_t i = 0; i < bins_.size(); ++i) bins_[i].merge(other.bins_[i]);
    out_of_range_ += other.out_of_range_;
}

double BinnedCurve::center(int i) const {
    const double a = lo(i);
    const double b = hi(i);
    return spacing_ == Spacing::Log ? std::sqrt(a * b) : 0.5 * (a + b);
}

int64_t BinnedCurve::total_count() const {
    int64_t total = 0;
    for (const auto& b : bins_) total += b.n;
    return total;
}

LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                          std::span<const double> weight) {
    LineFit fit;
    const size_t n = x.size();
    if (y.size() != n || weight.size() != n) {
        fit.reason = "input lengths differ";
        return fit;
    }
    if (n < 2) {
        fit.reason = "need at least two points";
        return fit;
    }

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double w = weight[i];
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
    }
    const double det = sw * swxx - swx * swx;
    if (!(det > 0.0) || !(sw > 0.0)) {
        fit.reason = "degenerate design (all x equal or zero weights)";
        return fit;
    }
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    fit.slope_se = std::sqrt(sw / det);
    fit.intercept_se = std::sqrt(swxx / det);
    fit.n_points = static_cast<int>(n);
    fit.ok = true;
    return fit;
}

OriginFit weighted_origin_fit(std::span<const double> x, std::span<const double> y,
                              std::span<const double> weight) {
    OriginFit fit;
    const size_t n = x.size();
    if (y.size() != n || weight.size() != n) {
        fit.reason = "input lengths differ";
        return fit;
    }
    if (n < 1) {
        fit.reason = "no points";
        return fit;
    }
    double swxx = 0, swxy = 0;
    for (size_t i = 0; i < n; ++i) {
        swxx += weight[i] * x[i] * x[i];
        swxy += weight[i] * x[i] * y[i];
    }
    if (!(swxx > 0.0)) {
        fit.reason = "degenerate design";
        return fit;
    }
    fit.coeff = swxy / swxx;
    fit.coeff_se = std::sqrt(1.0 / swxx);
    fit.n_points = static_cast<int>(n);
    fit.ok = true;
    return fit;
}

double minimize_scalar(double lo, double hi, int grid_points, double tol,
                       const std::function<double(double)>& objective) {
    if (!(lo < hi)) throw std::invalid_argument("minimize_scalar: lo must be < hi");

    // Coarse scan to bracket the global minimum.
    double best_x = lo;
    double best_f = objective(lo);
    for (int i = 1; i <= grid_points; ++i) {
        const double xi = lo + (hi - lo) * i / grid_points;
        const double fi = objective(xi);
        if (fi < best_f) {
            best_f = fi;
            best_x = xi;
        }
    }
    const double step = (hi - lo) / grid_points;
    double a = std::max(lo, best_x - step);
    double b = std::min(hi, best_x + step);

    // Golden-section refinement.
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = objective(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace metaforge
