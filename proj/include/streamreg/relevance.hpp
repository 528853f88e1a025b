#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "streamreg/density.hpp"

namespace streamreg {

/// Per-bin training weights: inverse smoothed density, floored, then rescaled
/// so the mean over bins that actually observed targets is 1. Rare-target bins
/// end up above 1, dense bins below.
class relevance_map {
public:
    relevance_map() = default;

    static relevance_map from_density(const smoothed_density& density, double floor);

    /// Same inversion + mean-1 rescale over raw per-bin values; `observed[b]`
    /// tells which bins count towards the normalizing mean.
    static relevance_map from_weights(std::span<const double> density_weights,
                                      std::span<const double> observed, double floor);

    double weight_at(std::size_t bin) const { return weights_[bin]; }
    std::span<const double> weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }
    bool empty() const { return weights_.empty(); }

    /// Training weight for target y. Bins unknown to the map (a lazy bin
    /// created after this map was built, or an empty map) are neutral: 1.
    double example_weight(const bin_structure& bins, double y) const {
        if (weights_.empty()) return 1.0;
        const auto bin = bins.find(y);
        if (!bin || *bin >= weights_.size()) return 1.0;
        return weights_[*bin];
    }

private:
    std::vector<double> weights_;
};

} // namespace streamreg
