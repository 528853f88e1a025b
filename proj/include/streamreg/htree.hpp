#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "streamreg/adwin.hpp"
#include "streamreg/errors.hpp"

namespace streamreg {

/// epsilon = sqrt(R^2 ln(1/delta) / (2n)).
double hoeffding_bound(double range, double delta, double n);

struct split_config {
    double delta = 1e-7;         // Hoeffding confidence parameter
    double range = 1.0;          // R; 1 for the merit-ratio formulation
    double grace_period = 200.0; // weight units between split attempts
    double tie_threshold = 0.05; // tau
    int candidate_cuts = 9;      // interior cut points per numeric attribute

    bool adaptive = false; // HAT: per-node ADWIN detectors + alternate subtrees
    adwin_config drift{};
    int swap_window = 200; // examples an alternate gets before swap-or-prune
};

/// Weighted count / mean / sum of squared deviations, mergeable.
struct weighted_stats {
    double weight = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double y, double w) {
        weight += w;
        const double delta = y - mean;
        mean += delta * (w / weight);
        m2 += w * delta * (y - mean);
    }
    void merge(const weighted_stats& o) {
        if (o.weight <= 0.0) return;
        if (weight <= 0.0) {
            *this = o;
            return;
        }
        const double total = weight + o.weight;
        const double delta = o.mean - mean;
        m2 += o.m2 + delta * delta * weight * o.weight / total;
        mean += delta * (o.weight / total);
        weight = total;
    }
    double variance() const { return weight > 0.0 ? m2 / weight : 0.0; }
    double sd() const;
};

struct prediction {
    double value = 0.0;
    bool cold_start = false; // true when the tree has seen nothing useful yet
};

/// (N(t), E_t[y]) along a root-to-leaf path; internal entries are frozen at
/// split time, the leaf entry is live.
struct path_entry {
    double weight = 0.0;
    double mean = 0.0;
};

struct drift_event {
    enum class action { flag, swap, prune };
    std::int64_t seq = 0;
    int node_id = 0;
    action what = action::flag;
};

/// Incremental Hoeffding tree regressor with weighted node statistics,
/// decile-cut numeric attribute observers and variance-reduction splits
/// certified by the Hoeffding bound on the second-best/best merit ratio.
/// With cfg.adaptive set, every node also monitors its subtree's absolute
/// prediction error (squashed to e/(1+e)) with ADWIN and grows an alternate
/// subtree on detected change.
class hoeffding_tree {
public:
    hoeffding_tree(split_config cfg, std::size_t n_features);
    hoeffding_tree(const hoeffding_tree& other);
    hoeffding_tree& operator=(const hoeffding_tree& other);
    hoeffding_tree(hoeffding_tree&&) noexcept = default;
    hoeffding_tree& operator=(hoeffding_tree&&) noexcept = default;
    ~hoeffding_tree();

    void learn(std::span<const double> x, double y, double w = 1.0);
    prediction predict(std::span<const double> x) const;

    /// Frozen (internal) + live (leaf) statistics along the route of x.
    std::vector<path_entry> path_stats(std::span<const double> x) const;

    /// Live statistics of the leaf x routes to.
    weighted_stats leaf_stats(std::span<const double> x) const;

    std::size_t n_features() const { return n_features_; }
    std::size_t node_count() const;
    std::size_t leaf_count() const;
    /// Alternate subtrees currently racing their originating node.
    std::size_t alternates_live() const;
    int depth() const;
    std::int64_t examples_seen() const { return examples_seen_; }
    const split_config& config() const { return cfg_; }
    const std::vector<drift_event>& drift_log() const { return drift_log_; }

    /// Indented text dump: node id, depth, N(t), E_t[y], split test.
    std::string dump() const;

    struct node; // exposed for white-box tests

private:
    struct node_deleter {
        void operator()(node* n) const;
    };
    using node_ptr = std::unique_ptr<node, node_deleter>;

    node_ptr make_leaf(const weighted_stats& seed);
    node_ptr clone_node(const node* src);
    void learn_into(node_ptr& slot, std::span<const double> x, double y, double w, bool monitor);
    void leaf_learn(node* t, std::span<const double> x, double y, double w);
    void ensure_observers(node* t);
    void attempt_split(node* t);
    double subtree_value(const node* t, std::span<const double> x) const;
    const node* route_to_leaf(std::span<const double> x) const;

    split_config cfg_;
    std::size_t n_features_ = 0;
    std::int64_t examples_seen_ = 0;
    int next_node_id_ = 0;
    node_ptr root_;
    std::vector<drift_event> drift_log_;
};

} // namespace streamreg
