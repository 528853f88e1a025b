#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>

#include "streamreg/density.hpp"
#include "streamreg/htree.hpp"
#include "streamreg/relevance.hpp"
#include "streamreg/shrinkage.hpp"
#include "streamreg/stream.hpp"

namespace streamreg {

enum class base_kind { ht, hat };

/// One grid point's hyperparameters. use_kde gates the density-weighting
/// pipeline; lambda = 0 disables hierarchical shrinkage.
struct variant_params {
    double bin_range = 0.0; // r; 0 = one lazy bin per distinct target
    double lambda = 0.0;
    double bandwidth = 10.0; // h
    int window_size = 100;   // |W| of the tumbling KDE window
    bool use_kde = false;
};

/// Anything the tuner can race: predict-then-train, cloneable, and able to
/// re-seed its predictor state from the deployed model between windows.
class online_model {
public:
    virtual ~online_model() = default;
    virtual prediction predict(std::span<const double> x) = 0;
    virtual void learn(std::span<const double> x, double y) = 0;
    virtual std::unique_ptr<online_model> clone() const = 0;
    /// Copies the deployed model's learned predictor; own hyperparameters and
    /// density bookkeeping stay. Default: no predictor state to share.
    virtual void sync_predictor_from(const online_model& /*deployed*/) {}
    /// Takes over the winner's hyperparameters without touching the learned
    /// predictor (the parameters-only adoption flavor).
    virtual void adopt_params(const variant_params& /*params*/) {}
    virtual std::string describe() const = 0;
};

struct variant_config {
    base_kind base = base_kind::ht;
    variant_params params;
    kernel_kind kernel = kernel_kind::gaussian;
    kde_distance distance = kde_distance::raw;
    double weight_floor = 1e-6;
    split_config tree;
};

/// Hoeffding tree (plain or drift-adaptive) with optional density-derived
/// training weights and optional shrinkage at prediction time.
///
/// Density pipeline: targets accumulate in a tumbling window; when the first
/// window completes, the bin structure freezes over the range seen so far;
/// each completed window is pushed through the incremental KDE and the
/// relevance map refreshes. Between refreshes the last map is used.
class variant_model final : public online_model {
public:
    variant_model(variant_config cfg, std::size_t n_features);

    prediction predict(std::span<const double> x) override;
    void learn(std::span<const double> x, double y) override;
    std::unique_ptr<online_model> clone() const override;
    void sync_predictor_from(const online_model& deployed) override;
    void adopt_params(const variant_params& p) override { set_params(p); }
    std::string describe() const override;

    void set_params(const variant_params& p);
    const variant_params& params() const { return cfg_.params; }
    const variant_config& config() const { return cfg_; }

    const hoeffding_tree& tree() const { return tree_; }
    const smoothed_density* density() const { return density_ ? &*density_ : nullptr; }
    const relevance_map& relevance() const { return relevance_; }

    /// Training weight the next example with target y would receive.
    double current_weight(double y) const;

private:
    void complete_window();

    variant_config cfg_;
    hoeffding_tree tree_;
    running_minmax target_range_;
    std::vector<double> window_;
    std::optional<smoothed_density> density_;
    relevance_map relevance_;
};

std::unique_ptr<online_model> make_variant_model(const variant_config& cfg,
                                                 std::size_t n_features);

/// Table-style display name, e.g. "HT + KDE + HS".
std::string variant_display_name(base_kind base, bool use_kde, bool use_hs);

} // namespace streamreg
