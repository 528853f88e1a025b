#include "streamreg/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace streamreg {

std::vector<variant_params> build_grid(tune_mode mode, const hyper_grids& grids) {
    std::vector<variant_params> out;
    switch (mode) {
        case tune_mode::none:
            out.push_back(variant_params{});
            break;
        case tune_mode::hs:
            if (grids.lambdas.empty()) throw config_error("hs mode needs a lambda grid");
            for (double lambda : grids.lambdas) {
                variant_params p;
                p.lambda = lambda;
                out.push_back(p);
            }
            break;
        case tune_mode::kde:
            if (grids.bin_ranges.empty() || grids.bandwidths.empty() || grids.window_sizes.empty())
                throw config_error("kde mode needs r, h and |W| grids");
            for (double r : grids.bin_ranges)
                for (double h : grids.bandwidths)
                    for (int w : grids.window_sizes)
                        out.push_back({.bin_range = r,
                                       .lambda = 0.0,
                                       .bandwidth = h,
                                       .window_size = w,
                                       .use_kde = true});
            break;
        case tune_mode::kde_hs:
            if (grids.bin_ranges.empty() || grids.lambdas.empty() || grids.bandwidths.empty() ||
                grids.window_sizes.empty())
                throw config_error("kde+hs mode needs r, lambda, h and |W| grids");
            for (double r : grids.bin_ranges)
                for (double lambda : grids.lambdas)
                    for (double h : grids.bandwidths)
                        for (int w : grids.window_sizes)
                            out.push_back({.bin_range = r,
                                           .lambda = lambda,
                                           .bandwidth = h,
                                           .window_size = w,
                                           .use_kde = true});
            break;
    }
    return out;
}

std::int64_t default_tuning_window(std::int64_t stream_len) {
    return std::min<std::int64_t>(stream_len / 8, 3000);
}

std::int64_t default_deploy_window(std::int64_t stream_len, std::int64_t tune_len) {
    return std::max<std::int64_t>(1, (stream_len - 4 * tune_len) / 4);
}

std::vector<phase> schedule_phases(std::int64_t stream_len, std::int64_t tune_len,
                                   std::int64_t deploy_len) {
    if (tune_len <= 0 || deploy_len <= 0)
        throw config_error("schedule_phases: window lengths must be > 0");
    if (stream_len < 1) throw config_error("schedule_phases: empty stream");
    std::vector<phase> out;
    std::int64_t pos = 1;
    bool tuning = true;
    while (pos <= stream_len) {
        const std::int64_t len = tuning ? tune_len : deploy_len;
        const std::int64_t end = std::min(pos + len - 1, stream_len);
        out.push_back({tuning, pos, end});
        pos = end + 1;
        tuning = !tuning;
    }
    return out;
}

ftl_tuner::ftl_tuner(std::vector<grid_point> grid, std::vector<phase> schedule,
                     std::unique_ptr<online_model> deployed, bool adopt_full_state, int threads)
    : grid_(std::move(grid)),
      phases_(std::move(schedule)),
      deployed_(std::move(deployed)),
      adopt_full_state_(adopt_full_state),
      threads_(threads < 1 ? 1 : threads) {
    if (grid_.empty()) throw config_error("tuner needs at least one grid point");
    if (phases_.empty()) throw config_error("tuner needs a schedule");
    if (!deployed_) throw config_error("tuner needs a deployed model");
}

void ftl_tuner::begin_window() {
    for (auto& g : grid_) {
        g.tuning_error = 0.0;
        g.model->sync_predictor_from(*deployed_);
    }
}

void ftl_tuner::end_window() {
    std::size_t winner = 0;
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (grid_[i].tuning_error < grid_[winner].tuning_error) winner = i; // first minimum wins
    ++windows_done_;
    log_.push_back({windows_done_, winner, grid_[winner].params, grid_[winner].tuning_error});
    if (adopt_full_state_) {
        deployed_ = grid_[winner].model->clone();
    } else {
        deployed_->adopt_params(grid_[winner].params);
    }
}

void ftl_tuner::fan_out(std::span<const double> x, double y) {
    auto run_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            auto& g = grid_[i];
            const prediction p = g.model->predict(x);
            g.tuning_error += std::fabs(p.value - y);
            g.model->learn(x, y);
        }
    };
    const std::size_t n = grid_.size();
    if (threads_ <= 1 || n < 8) {
        run_range(0, n);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads_, n);
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::future<void>> futs;
    for (std::size_t lo = 0; lo < n; lo += chunk)
        futs.push_back(std::async(std::launch::async, run_range, lo, std::min(lo + chunk, n)));
    for (auto& f : futs) f.get();
}

prediction ftl_tuner::step(const labeled_example& ex) {
    ++pos_;
    while (phase_ix_ < phases_.size() && pos_ > phases_[phase_ix_].end) ++phase_ix_;
    if (phase_ix_ >= phases_.size()) throw input_error("tuner stepped past its schedule");
    const phase& ph = phases_[phase_ix_];

    const std::span<const double> x(ex.features);
    const prediction emitted = deployed_->predict(x);
    if (ph.tuning) {
        if (pos_ == ph.begin) begin_window();
        fan_out(x, ex.target);
        deployed_->learn(x, ex.target);
        if (pos_ == ph.end) end_window();
    } else {
        deployed_->learn(x, ex.target);
    }
    return emitted;
}

ftl_tuner make_tuner(tune_mode mode, const hyper_grids& grids, const variant_config& base_cfg,
                     std::size_t n_features, std::vector<phase> schedule, bool adopt_full_state,
                     int threads) {
    std::vector<grid_point> grid;
    for (const variant_params& p : build_grid(mode, grids)) {
        variant_config cfg = base_cfg;
        cfg.params = p;
        grid.push_back({p, make_variant_model(cfg, n_features), 0.0});
    }
    // Before any evidence the leader is the first candidate; M starts as its twin.
    auto deployed = grid.front().model->clone();
    return ftl_tuner(std::move(grid), std::move(schedule), std::move(deployed), adopt_full_state,
                     threads);
}

} // namespace streamreg
