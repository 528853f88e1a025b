#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "streamreg/errors.hpp"

namespace streamreg {

enum class kernel_kind { gaussian, epanechnikov };

/// K(u). Both kernels are symmetric, nonnegative and integrate to 1.
double kernel_eval(kernel_kind kind, double u);

/// Units the kernel distance (q - z) is measured in.
///   raw: label space, per the plain KDE formula.
///   bin: lattice-index space, (q - z) / r; falls back to raw when r = 0.
enum class kde_distance { raw, bin };

/// Fixed-width partition of the target range [m, M] into intervals of width r,
/// with the degenerate r = 0 case keeping one lazily-created bin per distinct
/// target value. For r > 0, bin i covers [m + i*r, m + (i+1)*r) and the last
/// bin additionally contains M itself.
class bin_structure {
public:
    static bin_structure lattice(double lo, double hi, double r);
    static bin_structure lazy(); // r == 0

    /// Bin for target y. Lattice: out-of-range values clamp to the nearest bin
    /// and bump clamp_count(). Lazy: unseen values get a fresh bin appended.
    std::size_t index_of(double y);

    /// Lookup without side effects; nullopt for an unseen lazy value.
    std::optional<std::size_t> find(double y) const;

    double center(std::size_t bin) const { return centers_[bin]; }
    std::span<const double> centers() const { return centers_; }
    std::size_t size() const { return centers_.size(); }

    bool is_lazy() const { return r_ == 0.0; }
    double bin_range() const { return r_; }
    double min() const { return lo_; }
    double max() const { return hi_; }
    std::int64_t clamp_count() const { return clamps_; }

private:
    bin_structure() = default;
    double lo_ = 0.0, hi_ = 0.0, r_ = 0.0;
    std::vector<double> centers_;
    std::map<double, std::size_t> value_bins_; // lazy mode only
    std::int64_t clamps_ = 0;
};

/// Batch kernel density estimate over a multiset of (value, multiplicity)
/// pairs at query point q. This is the reference path the incremental
/// estimator must agree with.
double kde_batch(std::span<const std::pair<double, double>> multiset, kernel_kind kind,
                 double bandwidth, double q);

/// Per-bin smoothed weights maintained incrementally: each new target value z
/// (replaced by its bin center) moves every bin's weight by
///   f_n(q) = f_{n-1}(q) + (1/n) * ((1/h) K((q - z)/h) - f_{n-1}(q)),
/// which telescopes to the batch estimate over the same n values.
class smoothed_density {
public:
    smoothed_density(bin_structure bins, kernel_kind kind, double bandwidth,
                     kde_distance distance = kde_distance::raw);

    /// Incorporates one target value.
    void update(double z);

    /// Bins each target in order and applies update(); Algorithm-1 granularity.
    void process_window(std::span<const double> window);

    std::int64_t count() const { return n_; }
    double bandwidth() const { return h_; }
    kernel_kind kernel() const { return kind_; }
    kde_distance distance() const { return distance_; }

    std::span<const double> weights() const { return weights_; }
    double weight(std::size_t bin) const { return weights_[bin]; }
    /// Raw multiplicity of targets that landed in `bin`.
    double observed(std::size_t bin) const { return counts_[bin]; }

    const bin_structure& bins() const { return bins_; }
    bin_structure& bins() { return bins_; }

private:
    double point_mass(double q, double z) const; // (1/h) K(dist(q, z) / h)
    double batch_at(double q) const;             // over the multiplicities seen so far

    bin_structure bins_;
    kernel_kind kind_;
    double h_;
    kde_distance distance_;
    std::int64_t n_ = 0;
    std::vector<double> weights_;
    std::vector<double> counts_;
};

} // namespace streamreg
