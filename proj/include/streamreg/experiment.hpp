#pragma once

#include <optional>
#include <string>
#include <vector>

#include "streamreg/metrics.hpp"
#include "streamreg/stream.hpp"
#include "streamreg/tuner.hpp"

namespace streamreg {

/// Everything one experiment needs: data, model variant, grids, schedule.
struct run_config {
    stream_spec stream;
    base_kind base = base_kind::ht;
    tune_mode mode = tune_mode::none;
    hyper_grids grids;
    kernel_kind kernel = kernel_kind::gaussian;
    kde_distance distance = kde_distance::raw;
    double weight_floor = 1e-6;
    split_config tree;
    std::optional<std::int64_t> tune_window;   // s_t override
    std::optional<std::int64_t> deploy_window; // s_t' override
    bool adopt_full_state = true;
    unsigned seed = 1; // reserved for synthetic sources; the pipeline itself is deterministic
    int threads = 1;
    std::string out_dir; // empty = no files, results only
    bool verbose = false;
    bool dump_density = false;
    std::size_t metrics_stride = 1000; // emission cadence and trailing-window size
};

struct run_result {
    std::string model_name; // Table-style, e.g. "HAT + KDE"
    std::int64_t examples = 0;
    double mae = 0.0;
    double rmse = 0.0;
    double r2 = 0.0;
    std::int64_t tuning_windows = 0;
    std::vector<std::string> files_written;
};

/// Streams the dataset once through the tuner, tracking prequential metrics
/// and writing metrics / tuning-log / summary CSVs (drift events and density
/// dump when enabled). Partial outputs are removed on error.
run_result run_experiment(const run_config& cfg);

struct named_dataset {
    std::string name;
    stream_spec stream;
};

/// All eight variants (HT/HAT x none/HS/KDE/KDE+HS) on every dataset; writes
/// one combined summary CSV with per-dataset best flags. Any failing run
/// aborts with the failing configuration named.
std::vector<run_result> run_matrix(const std::vector<named_dataset>& datasets,
                                   const run_config& base_cfg, const std::string& out_dir);

} // namespace streamreg
