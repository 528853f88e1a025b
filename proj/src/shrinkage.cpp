#include "streamreg/shrinkage.hpp"

#include <cassert>
#include <cmath>

namespace streamreg {

double hs_predict(std::span<const path_entry> path, double lambda) {
    if (path.empty()) throw empty_state_error("hs_predict over an empty path");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw config_error("hs_predict: lambda must be finite and >= 0");
    if (lambda == 0.0) return path.back().mean; // telescopes exactly to the leaf mean
    double acc = path.front().mean;
    for (std::size_t l = 1; l < path.size(); ++l) {
        const double parent_n = path[l - 1].weight;
        assert(parent_n > 0.0); // a node must see examples before it can split
        acc += (path[l].mean - path[l - 1].mean) / (1.0 + lambda / parent_n);
    }
    return acc;
}

prediction wrap_predict(const hoeffding_tree& tree, std::span<const double> x, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw config_error("wrap_predict: lambda must be finite and >= 0");
    const prediction base = tree.predict(x);
    if (base.cold_start || lambda == 0.0) return base;
    const auto path = tree.path_stats(x);
    return {hs_predict(path, lambda), false};
}

} // namespace streamreg
