#include "streamreg/htree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace streamreg {

double hoeffding_bound(double range, double delta, double n) {
    if (!(range > 0.0)) throw config_error("hoeffding_bound: range must be > 0");
    if (!(delta > 0.0) || delta > 1.0) throw config_error("hoeffding_bound: delta must be in (0, 1]");
    if (!(n >= 1.0)) throw config_error("hoeffding_bound: n must be >= 1");
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

double weighted_stats::sd() const {
    const double v = variance();
    return v > 0.0 ? std::sqrt(v) : 0.0;
}

namespace {

/// Streaming summary of one numeric attribute at a leaf: decile cut points
/// frozen from the warm-up range, one weighted y-summary per region.
struct attribute_observer {
    std::vector<double> cuts;             // ascending interior cut points
    std::vector<weighted_stats> regions;  // cuts.size() + 1

    void add(double x, double y, double w) {
        const auto r = static_cast<std::size_t>(
            std::lower_bound(cuts.begin(), cuts.end(), x) - cuts.begin());
        regions[r].add(y, w);
    }
};

struct split_candidate {
    double merit = -1.0;
    int attribute = -1;
    double threshold = 0.0;
    weighted_stats left, right;
};

} // namespace

struct hoeffding_tree::node {
    int id = 0;

    // Live statistics for leaves; frozen at split time for internal nodes.
    weighted_stats stats;

    // Leaf-only machinery.
    struct row {
        std::vector<double> x;
        double y = 0.0;
        double w = 0.0;
    };
    std::vector<row> warm; // buffered until observer cuts freeze
    std::vector<attribute_observer> observers;
    bool observers_ready = false;
    double weight_at_last_attempt = 0.0;

    // Split test (internal nodes).
    int split_attr = -1;
    double threshold = 0.0;
    node_ptr left;
    node_ptr right;

    // Adaptive (HAT) state.
    std::unique_ptr<adwin> detector;
    node_ptr alternate;
    std::int64_t alt_seen = 0;
    double alt_err_sum = 0.0;
    double main_err_sum = 0.0;

    bool is_leaf() const { return !left; }
};

void hoeffding_tree::node_deleter::operator()(node* n) const {
    delete n;
}

hoeffding_tree::hoeffding_tree(split_config cfg, std::size_t n_features)
    : cfg_(cfg), n_features_(n_features) {
    if (!(cfg_.delta > 0.0) || cfg_.delta >= 1.0)
        throw config_error("split_config: delta must be in (0, 1)");
    if (!(cfg_.grace_period >= 1.0)) throw config_error("split_config: grace_period must be >= 1");
    if (cfg_.tie_threshold < 0.0) throw config_error("split_config: tie_threshold must be >= 0");
    root_ = make_leaf(weighted_stats{});
}

hoeffding_tree::~hoeffding_tree() = default;

hoeffding_tree::hoeffding_tree(const hoeffding_tree& other)
    : cfg_(other.cfg_),
      n_features_(other.n_features_),
      examples_seen_(other.examples_seen_),
      next_node_id_(other.next_node_id_),
      root_(nullptr),
      drift_log_(other.drift_log_) {
    root_ = clone_node(other.root_.get());
}

hoeffding_tree& hoeffding_tree::operator=(const hoeffding_tree& other) {
    if (this == &other) return *this;
    cfg_ = other.cfg_;
    n_features_ = other.n_features_;
    examples_seen_ = other.examples_seen_;
    next_node_id_ = other.next_node_id_;
    drift_log_ = other.drift_log_;
    root_ = clone_node(other.root_.get());
    return *this;
}

hoeffding_tree::node_ptr hoeffding_tree::clone_node(const node* src) {
    if (!src) return nullptr;
    node_ptr dst(new node());
    dst->id = src->id;
    dst->stats = src->stats;
    dst->warm = src->warm;
    dst->observers = src->observers;
    dst->observers_ready = src->observers_ready;
    dst->weight_at_last_attempt = src->weight_at_last_attempt;
    dst->split_attr = src->split_attr;
    dst->threshold = src->threshold;
    dst->left = clone_node(src->left.get());
    dst->right = clone_node(src->right.get());
    if (src->detector) dst->detector = std::make_unique<adwin>(*src->detector);
    dst->alternate = clone_node(src->alternate.get());
    dst->alt_seen = src->alt_seen;
    dst->alt_err_sum = src->alt_err_sum;
    dst->main_err_sum = src->main_err_sum;
    return dst;
}

hoeffding_tree::node_ptr hoeffding_tree::make_leaf(const weighted_stats& seed) {
    node_ptr n(new node());
    n->id = next_node_id_++;
    n->stats = seed;
    // Grace-period accounting starts from the seeded weight.
    n->weight_at_last_attempt = seed.weight;
    return n;
}

const hoeffding_tree::node* hoeffding_tree::route_to_leaf(std::span<const double> x) const {
    const node* t = root_.get();
    while (!t->is_leaf()) t = x[t->split_attr] <= t->threshold ? t->left.get() : t->right.get();
    return t;
}

double hoeffding_tree::subtree_value(const node* t, std::span<const double> x) const {
    while (!t->is_leaf()) t = x[t->split_attr] <= t->threshold ? t->left.get() : t->right.get();
    return t->stats.weight > 0.0 ? t->stats.mean : 0.0;
}

prediction hoeffding_tree::predict(std::span<const double> x) const {
    if (x.size() != n_features_) throw input_error("predict: feature dimension mismatch");
    const node* leaf = route_to_leaf(x);
    if (leaf->stats.weight > 0.0) return {leaf->stats.mean, false};
    return {0.0, true};
}

std::vector<path_entry> hoeffding_tree::path_stats(std::span<const double> x) const {
    if (x.size() != n_features_) throw input_error("path_stats: feature dimension mismatch");
    std::vector<path_entry> path;
    const node* t = root_.get();
    while (true) {
        path.push_back({t->stats.weight, t->stats.mean});
        if (t->is_leaf()) break;
        t = x[t->split_attr] <= t->threshold ? t->left.get() : t->right.get();
    }
    return path;
}

void hoeffding_tree::learn(std::span<const double> x, double y, double w) {
    if (x.size() != n_features_) throw input_error("learn: feature dimension mismatch");
    if (!(w > 0.0)) throw input_error("learn: weight must be > 0");
    if (!std::isfinite(y)) throw input_error("learn: target must be finite");
    ++examples_seen_;
    learn_into(root_, x, y, w, cfg_.adaptive);
}

void hoeffding_tree::learn_into(node_ptr& slot, std::span<const double> x, double y, double w,
                                bool monitor) {
    node* t = slot.get();

    if (monitor) {
        const double y_hat = subtree_value(t, x);
        const double err = std::fabs(y_hat - y);
        if (!t->detector) t->detector = std::make_unique<adwin>(cfg_.drift);
        const bool flagged = t->detector->update(err / (1.0 + err));
        if (flagged && !t->alternate) {
            t->alternate = make_leaf(weighted_stats{});
            drift_log_.push_back({examples_seen_, t->id, drift_event::action::flag});
        }
        if (t->alternate) {
            // Both sides are scored predict-then-train on the same example.
            // Alternates grow as plain subtrees; detectors attach once promoted.
            const double alt_hat = subtree_value(t->alternate.get(), x);
            t->alt_err_sum += std::fabs(alt_hat - y);
            t->main_err_sum += err;
            ++t->alt_seen;
            learn_into(t->alternate, x, y, w, false);
            if (t->alt_seen >= cfg_.swap_window) {
                if (t->alt_err_sum < t->main_err_sum) {
                    drift_log_.push_back({examples_seen_, t->id, drift_event::action::swap});
                    node_ptr promoted = std::move(t->alternate);
                    slot = std::move(promoted); // old subtree discarded
                    return;                     // promoted subtree already absorbed this example
                }
                drift_log_.push_back({examples_seen_, t->id, drift_event::action::prune});
                t->alternate.reset();
                t->alt_seen = 0;
                t->alt_err_sum = 0.0;
                t->main_err_sum = 0.0;
            }
        }
    }

    if (t->is_leaf()) {
        leaf_learn(t, x, y, w);
    } else {
        learn_into(x[t->split_attr] <= t->threshold ? t->left : t->right, x, y, w, monitor);
    }
}

void hoeffding_tree::leaf_learn(node* t, std::span<const double> x, double y, double w) {
    t->stats.add(y, w);
    if (t->observers_ready) {
        for (std::size_t j = 0; j < n_features_; ++j) t->observers[j].add(x[j], y, w);
    } else {
        t->warm.push_back({{x.begin(), x.end()}, y, w});
    }
    if (t->stats.weight - t->weight_at_last_attempt >= cfg_.grace_period) {
        t->weight_at_last_attempt = t->stats.weight;
        attempt_split(t);
    }
}

void hoeffding_tree::ensure_observers(node* t) {
    if (t->observers_ready) return;
    t->observers.assign(n_features_, {});
    for (std::size_t j = 0; j < n_features_; ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& r : t->warm) {
            lo = std::min(lo, r.x[j]);
            hi = std::max(hi, r.x[j]);
        }
        auto& obs = t->observers[j];
        if (hi > lo) {
            const int k = cfg_.candidate_cuts;
            obs.cuts.reserve(k);
            for (int i = 1; i <= k; ++i)
                obs.cuts.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                            static_cast<double>(k + 1));
        }
        obs.regions.assign(obs.cuts.size() + 1, weighted_stats{});
        for (const auto& r : t->warm) obs.add(r.x[j], r.y, r.w);
    }
    t->warm.clear();
    t->warm.shrink_to_fit();
    t->observers_ready = true;
}

namespace {

/// Standard-deviation reduction of splitting `parent` into (left, right).
double sd_reduction(const weighted_stats& parent, const weighted_stats& left,
                    const weighted_stats& right) {
    const double total = left.weight + right.weight;
    return parent.sd() - (left.weight / total) * left.sd() -
           (right.weight / total) * right.sd();
}

} // namespace

void hoeffding_tree::attempt_split(node* t) {
    if (!(t->stats.m2 > 0.0)) return; // all targets identical so far
    if (!(t->stats.weight >= 1.0)) return;
    ensure_observers(t);

    // Best candidate cut per attribute.
    split_candidate best, second;
    for (std::size_t j = 0; j < n_features_; ++j) {
        const auto& obs = t->observers[j];
        split_candidate cand;
        weighted_stats prefix;
        for (std::size_t k = 0; k + 1 < obs.regions.size(); ++k) {
            prefix.merge(obs.regions[k]);
            if (!(prefix.weight > 0.0)) continue;
            weighted_stats suffix;
            for (std::size_t m = k + 1; m < obs.regions.size(); ++m) suffix.merge(obs.regions[m]);
            if (!(suffix.weight > 0.0)) continue;
            const double merit = sd_reduction(t->stats, prefix, suffix);
            if (merit > cand.merit) {
                cand.merit = merit;
                cand.attribute = static_cast<int>(j);
                cand.threshold = obs.cuts[k];
                cand.left = prefix;
                cand.right = suffix;
            }
        }
        if (cand.merit > best.merit) {
            second = best;
            best = cand;
        } else if (cand.merit > second.merit) {
            second = cand;
        }
    }

    if (!(best.merit > 0.0)) return;
    const double eps = hoeffding_bound(cfg_.range, cfg_.delta, t->stats.weight);
    const double second_merit = second.merit > 0.0 ? second.merit : 0.0;
    const bool confident = second_merit / best.merit < 1.0 - eps;
    const bool tie = eps < cfg_.tie_threshold;
    if (!confident && !tie) return;

    // Split: freeze this node's statistics, seed children with the branch
    // statistics accumulated by the winning observer.
    t->split_attr = best.attribute;
    t->threshold = best.threshold;
    t->left = make_leaf(best.left);
    t->right = make_leaf(best.right);
    t->observers.clear();
    t->observers_ready = false;
    t->warm.clear();
}

std::size_t hoeffding_tree::node_count() const {
    std::size_t n = 0;
    auto walk = [&](auto&& self, const node* t) -> void {
        if (!t) return;
        ++n;
        self(self, t->left.get());
        self(self, t->right.get());
    };
    walk(walk, root_.get());
    return n;
}

std::size_t hoeffding_tree::leaf_count() const {
    std::size_t n = 0;
    auto walk = [&](auto&& self, const node* t) -> void {
        if (!t) return;
        if (t->is_leaf()) ++n;
        self(self, t->left.get());
        self(self, t->right.get());
    };
    walk(walk, root_.get());
    return n;
}

std::size_t hoeffding_tree::alternates_live() const {
    std::size_t n = 0;
    auto walk = [&](auto&& self, const node* t) -> void {
        if (!t) return;
        if (t->alternate) ++n;
        self(self, t->left.get());
        self(self, t->right.get());
        self(self, t->alternate.get());
    };
    walk(walk, root_.get());
    return n;
}

int hoeffding_tree::depth() const {
    auto walk = [&](auto&& self, const node* t) -> int {
        if (!t || t->is_leaf()) return 0;
        return 1 + std::max(self(self, t->left.get()), self(self, t->right.get()));
    };
    return walk(walk, root_.get());
}

std::string hoeffding_tree::dump() const {
    std::ostringstream out;
    auto walk = [&](auto&& self, const node* t, int depth) -> void {
        if (!t) return;
        for (int i = 0; i < depth; ++i) out << "  ";
        char buf[160];
        if (t->is_leaf()) {
            std::snprintf(buf, sizeof(buf), "leaf id=%d n=%.6g mean=%.6g", t->id,
                          t->stats.weight, t->stats.mean);
            out << buf << '\n';
        } else {
            std::snprintf(buf, sizeof(buf), "node id=%d n=%.6g mean=%.6g split=[x%d <= %.6g]",
                          t->id, t->stats.weight, t->stats.mean, t->split_attr, t->threshold);
            out << buf << '\n';
            self(self, t->left.get(), depth + 1);
            self(self, t->right.get(), depth + 1);
        }
    };
    walk(walk, root_.get(), 0);
    return out.str();
}

} // namespace streamreg
