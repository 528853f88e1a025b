#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "streamreg/model.hpp"

namespace streamreg {

enum class tune_mode { none, kde, hs, kde_hs };

/// Candidate values per hyperparameter; defaults are the standard experiment
/// grids.
struct hyper_grids {
    std::vector<double> bin_ranges{0.0, 0.1, 0.2, 0.5, 1.0}; // r
    std::vector<double> lambdas{0.0, 0.1, 1.0, 10.0, 15.0, 25.0};
    std::vector<double> bandwidths{10.0, 50.0, 100.0}; // h
    std::vector<int> window_sizes{50, 100, 200};       // |W|
};

/// Cartesian product per mode: kde+hs crosses r x lambda x h x |W|; kde fixes
/// lambda = 0; hs varies lambda only; none yields the single base point.
/// Enumeration order (r outermost, |W| innermost) defines tie-breaking.
std::vector<variant_params> build_grid(tune_mode mode, const hyper_grids& grids);

/// Contiguous 1-based index ranges alternating tune / deploy, starting with a
/// tuning phase at example 1; the last phase truncates at the stream end.
struct phase {
    bool tuning = false;
    std::int64_t begin = 0;
    std::int64_t end = 0; // inclusive
};
std::vector<phase> schedule_phases(std::int64_t stream_len, std::int64_t tune_len,
                                   std::int64_t deploy_len);

/// min(floor(|S|/8), 3000)
std::int64_t default_tuning_window(std::int64_t stream_len);
/// floor((|S| - 4 s_t) / 4), clamped to >= 1: spreads four tuning periods
/// evenly across the stream.
std::int64_t default_deploy_window(std::int64_t stream_len, std::int64_t tune_len);

struct grid_point {
    variant_params params;
    std::unique_ptr<online_model> model;
    double tuning_error = 0.0; // cumulative |y_hat - y| within the current window
};

struct tuning_log_row {
    int window_index = 0; // 1-based tuning-window counter
    std::size_t winner = 0;
    variant_params params;
    double error = 0.0;
};

/// Follow-the-Leader driver. Within a tuning window every grid model runs
/// predict-then-train and accumulates error; the deployed model M also trains
/// and serves the emitted prediction. At the window end M adopts the winner
/// (full model state by default, hyperparameters only when adopt_full_state
/// is off), and at the next window start every grid point re-seeds its
/// predictor from M. Outside tuning windows only M runs.
class ftl_tuner {
public:
    ftl_tuner(std::vector<grid_point> grid, std::vector<phase> schedule,
              std::unique_ptr<online_model> deployed, bool adopt_full_state = true,
              int threads = 1);

    prediction step(const labeled_example& ex);

    std::int64_t position() const { return pos_; }
    const online_model& deployed() const { return *deployed_; }
    online_model& deployed() { return *deployed_; }
    const std::vector<grid_point>& grid() const { return grid_; }
    const std::vector<tuning_log_row>& log() const { return log_; }

private:
    void begin_window();
    void end_window();
    void fan_out(std::span<const double> x, double y);

    std::vector<grid_point> grid_;
    std::vector<phase> phases_;
    std::size_t phase_ix_ = 0;
    std::int64_t pos_ = 0;
    std::unique_ptr<online_model> deployed_;
    bool adopt_full_state_;
    int threads_;
    int windows_done_ = 0;
    std::vector<tuning_log_row> log_;
};

/// Convenience: grid + deployed model (a fresh clone of the first grid point)
/// wired to a schedule.
ftl_tuner make_tuner(tune_mode mode, const hyper_grids& grids, const variant_config& base_cfg,
                     std::size_t n_features, std::vector<phase> schedule,
                     bool adopt_full_state = true, int threads = 1);

} // namespace streamreg
