#include "streamreg/model.hpp"

#include <sstream>

namespace streamreg {

variant_model::variant_model(variant_config cfg, std::size_t n_features)
    : cfg_(cfg), tree_(cfg.tree, n_features) {
    if (cfg_.params.use_kde) {
        if (!(cfg_.params.bandwidth > 0.0)) throw config_error("variant: bandwidth must be > 0");
        if (cfg_.params.window_size < 1) throw config_error("variant: window size must be >= 1");
        if (cfg_.params.bin_range < 0.0) throw config_error("variant: bin range must be >= 0");
        window_.reserve(static_cast<std::size_t>(cfg_.params.window_size));
    }
    if (cfg_.params.lambda < 0.0) throw config_error("variant: lambda must be >= 0");
}

prediction variant_model::predict(std::span<const double> x) {
    if (cfg_.params.lambda > 0.0) return wrap_predict(tree_, x, cfg_.params.lambda);
    return tree_.predict(x);
}

double variant_model::current_weight(double y) const {
    if (!cfg_.params.use_kde || relevance_.empty() || !density_) return 1.0;
    return relevance_.example_weight(density_->bins(), y);
}

void variant_model::learn(std::span<const double> x, double y) {
    tree_.learn(x, y, current_weight(y));
    if (!cfg_.params.use_kde) return;
    target_range_.update(y);
    window_.push_back(y);
    if (window_.size() >= static_cast<std::size_t>(cfg_.params.window_size)) complete_window();
}

void variant_model::complete_window() {
    if (!density_) {
        // First tumbling window done: freeze the bin lattice over the target
        // range seen so far. Later out-of-range targets clamp into edge bins.
        bin_structure bins =
            cfg_.params.bin_range > 0.0
                ? bin_structure::lattice(target_range_.min(), target_range_.max(),
                                         cfg_.params.bin_range)
                : bin_structure::lazy();
        density_.emplace(std::move(bins), cfg_.kernel, cfg_.params.bandwidth, cfg_.distance);
    }
    density_->process_window(window_);
    relevance_ = relevance_map::from_density(*density_, cfg_.weight_floor);
    window_.clear();
}

std::unique_ptr<online_model> variant_model::clone() const {
    return std::make_unique<variant_model>(*this);
}

void variant_model::sync_predictor_from(const online_model& deployed) {
    if (const auto* other = dynamic_cast<const variant_model*>(&deployed)) {
        tree_ = other->tree_;
    }
}

void variant_model::set_params(const variant_params& p) {
    const bool kde_changed = p.use_kde != cfg_.params.use_kde ||
                             p.bin_range != cfg_.params.bin_range ||
                             p.bandwidth != cfg_.params.bandwidth ||
                             p.window_size != cfg_.params.window_size;
    cfg_.params = p;
    if (kde_changed) {
        // Density state is defined by (r, h, |W|); a new combination starts
        // clean and re-freezes its bins at the next window completion.
        density_.reset();
        relevance_ = relevance_map{};
        window_.clear();
    }
}

std::string variant_model::describe() const {
    std::ostringstream out;
    out << (cfg_.base == base_kind::ht ? "ht" : "hat");
    if (cfg_.params.use_kde)
        out << " kde(r=" << cfg_.params.bin_range << ",h=" << cfg_.params.bandwidth
            << ",w=" << cfg_.params.window_size << ")";
    if (cfg_.params.lambda > 0.0) out << " hs(lambda=" << cfg_.params.lambda << ")";
    return out.str();
}

std::unique_ptr<online_model> make_variant_model(const variant_config& cfg,
                                                 std::size_t n_features) {
    variant_config full = cfg;
    full.tree.adaptive = cfg.base == base_kind::hat;
    return std::make_unique<variant_model>(full, n_features);
}

std::string variant_display_name(base_kind base, bool use_kde, bool use_hs) {
    std::string name = base == base_kind::ht ? "HT" : "HAT";
    if (use_kde) name += " + KDE";
    if (use_hs) name += " + HS";
    return name;
}

} // namespace streamreg
