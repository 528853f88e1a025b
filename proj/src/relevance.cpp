#include "streamreg/relevance.hpp"

#include <algorithm>

namespace streamreg {

relevance_map relevance_map::from_weights(std::span<const double> density_weights,
                                          std::span<const double> observed, double floor) {
    if (!(floor > 0.0)) throw config_error("relevance floor must be > 0");
    if (std::all_of(density_weights.begin(), density_weights.end(),
                    [](double v) { return v == 0.0; }))
        throw empty_state_error("relevance from an all-zero density");

    relevance_map map;
    map.weights_.resize(density_weights.size());
    double observed_sum = 0.0;
    std::size_t observed_bins = 0;
    for (std::size_t b = 0; b < density_weights.size(); ++b) {
        map.weights_[b] = 1.0 / std::max(density_weights[b], floor);
        if (observed[b] > 0.0) {
            observed_sum += map.weights_[b];
            ++observed_bins;
        }
    }
    if (observed_bins == 0) throw empty_state_error("relevance with no observed bins");
    const double mean = observed_sum / static_cast<double>(observed_bins);
    for (double& w : map.weights_) w /= mean;
    return map;
}

relevance_map relevance_map::from_density(const smoothed_density& density, double floor) {
    if (density.count() == 0) throw empty_state_error("relevance from an empty density");
    std::vector<double> observed(density.bins().size());
    for (std::size_t b = 0; b < observed.size(); ++b) observed[b] = density.observed(b);
    return from_weights(density.weights(), observed, floor);
}

} // namespace streamreg
