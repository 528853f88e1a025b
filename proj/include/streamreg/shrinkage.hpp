#pragma once

#include <span>

#include "streamreg/htree.hpp"

namespace streamreg {

/// Hierarchical shrinkage over a root-to-leaf path of (N(t), E_t[y]) pairs:
///
///   y_hat = E_{t0}[y] + sum_l (E_{tl}[y] - E_{t(l-1)}[y]) / (1 + lambda / N(t(l-1)))
///
/// lambda = 0 returns the leaf mean bit-exactly; lambda -> inf approaches the
/// root mean. The result always lies within [min, max] of the path means.
double hs_predict(std::span<const path_entry> path, double lambda);

/// Applies hs_predict to the path routed by x. Post-hoc only: tree structure
/// and statistics are untouched. Cold trees behave exactly like predict().
prediction wrap_predict(const hoeffding_tree& tree, std::span<const double> x, double lambda);

} // namespace streamreg
