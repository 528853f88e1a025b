#include "streamreg/density.hpp"

#include <cmath>

namespace streamreg {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779; // 1/sqrt(2*pi)
}

double kernel_eval(kernel_kind kind, double u) {
    switch (kind) {
        case kernel_kind::gaussian:
            return kInvSqrt2Pi * std::exp(-0.5 * u * u);
        case kernel_kind::epanechnikov:
            return (u <= 1.0 && u >= -1.0) ? 0.75 * (1.0 - u * u) : 0.0;
    }
    return 0.0;
}

bin_structure bin_structure::lattice(double lo, double hi, double r) {
    if (!(r > 0.0)) throw config_error("lattice bins need r > 0");
    if (!(lo <= hi)) throw config_error("bin range needs min <= max");
    bin_structure b;
    b.lo_ = lo;
    b.hi_ = hi;
    b.r_ = r;
    const auto top = static_cast<std::size_t>(std::floor((hi - lo) / r));
    b.centers_.reserve(top + 1);
    for (std::size_t i = 0; i <= top; ++i) b.centers_.push_back(lo + (static_cast<double>(i) + 0.5) * r);
    return b;
}

bin_structure bin_structure::lazy() {
    return bin_structure{};
}

std::size_t bin_structure::index_of(double y) {
    if (is_lazy()) {
        auto it = value_bins_.find(y);
        if (it != value_bins_.end()) return it->second;
        const std::size_t idx = centers_.size();
        centers_.push_back(y);
        value_bins_.emplace(y, idx);
        return idx;
    }
    if (y < lo_ || y > hi_) ++clamps_;
    if (y <= lo_) return 0;
    const std::size_t last = centers_.size() - 1;
    if (y >= hi_) return last;
    const auto i = static_cast<std::size_t>(std::floor((y - lo_) / r_));
    return i > last ? last : i;
}

std::optional<std::size_t> bin_structure::find(double y) const {
    if (is_lazy()) {
        auto it = value_bins_.find(y);
        if (it == value_bins_.end()) return std::nullopt;
        return it->second;
    }
    if (centers_.empty()) return std::nullopt;
    if (y <= lo_) return std::size_t{0};
    const std::size_t last = centers_.size() - 1;
    if (y >= hi_) return last;
    const auto i = static_cast<std::size_t>(std::floor((y - lo_) / r_));
    return i > last ? last : i;
}

double kde_batch(std::span<const std::pair<double, double>> multiset, kernel_kind kind,
                 double bandwidth, double q) {
    if (!(bandwidth > 0.0)) throw config_error("kde bandwidth must be > 0");
    double cardinality = 0.0;
    double acc = 0.0;
    for (const auto& [value, multiplicity] : multiset) {
        cardinality += multiplicity;
        acc += multiplicity * kernel_eval(kind, (q - value) / bandwidth);
    }
    if (!(cardinality > 0.0)) throw empty_state_error("kde_batch over an empty multiset");
    return acc / (cardinality * bandwidth);
}

smoothed_density::smoothed_density(bin_structure bins, kernel_kind kind, double bandwidth,
                                   kde_distance distance)
    : bins_(std::move(bins)), kind_(kind), h_(bandwidth), distance_(distance) {
    if (!(h_ > 0.0)) throw config_error("kde bandwidth must be > 0");
    weights_.assign(bins_.size(), 0.0);
    counts_.assign(bins_.size(), 0.0);
}

double smoothed_density::point_mass(double q, double z) const {
    double d = q - z;
    if (distance_ == kde_distance::bin && bins_.bin_range() > 0.0) d /= bins_.bin_range();
    return kernel_eval(kind_, d / h_) / h_;
}

double smoothed_density::batch_at(double q) const {
    double acc = 0.0;
    for (std::size_t b = 0; b < counts_.size(); ++b)
        acc += counts_[b] * point_mass(q, bins_.center(b));
    return acc / static_cast<double>(n_);
}

void smoothed_density::update(double z) {
    const std::size_t target_bin = bins_.index_of(z);
    if (bins_.size() > weights_.size()) {
        // A lazy bin appeared: its weight must match the batch estimate over
        // the n values already absorbed, as if the bin had existed all along.
        while (weights_.size() < bins_.size()) {
            const double q = bins_.center(weights_.size());
            weights_.push_back(n_ > 0 ? batch_at(q) : 0.0);
            counts_.push_back(0.0);
        }
    }
    const double center = bins_.center(target_bin);
    const double inv_n = 1.0 / static_cast<double>(n_ + 1);
    for (std::size_t b = 0; b < weights_.size(); ++b) {
        const double bump = point_mass(bins_.center(b), center);
        weights_[b] += inv_n * (bump - weights_[b]);
    }
    counts_[target_bin] += 1.0;
    ++n_;
}

void smoothed_density::process_window(std::span<const double> window) {
    if (window.empty()) throw empty_state_error("process_window over an empty window");
    for (double z : window) update(z);
}

} // namespace streamreg
