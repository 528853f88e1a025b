// streamreg: prequential experiments with Hoeffding-tree regressors, incremental
// KDE target weighting, hierarchical shrinkage and Follow-the-Leader tuning.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streamreg/experiment.hpp"

namespace {

using namespace streamreg;

struct cli_options {
    std::string dataset;
    std::string target_col;
    std::vector<std::int64_t> drop_indices;
    std::int64_t max_examples = 0;
    std::string target_transform_name = "identity";
    std::string missing_policy_name = "skip-row";
    std::string delimiter = ",";

    std::string base_name = "ht";
    std::string mode_name = "none";
    std::vector<double> r_grid{0.0, 0.1, 0.2, 0.5, 1.0};
    std::vector<double> lambda_grid{0.0, 0.1, 1.0, 10.0, 15.0, 25.0};
    std::vector<double> h_grid{10.0, 50.0, 100.0};
    std::vector<int> w_grid{50, 100, 200};
    std::string kernel_name = "gaussian";
    std::string distance_name = "raw";
    double weight_floor = 1e-6;

    std::int64_t tune_window = 0;
    std::int64_t deploy_window = 0;
    bool adopt_params_only = false;

    double split_delta = 1e-7;
    double grace = 200.0;
    double tie_threshold = 0.05;
    double adwin_delta = 0.002;

    unsigned seed = 1;
    int threads = 1;
    std::string out;
    bool verbose = false;
    bool dump_density = false;
};

void add_model_flags(CLI::App* cmd, cli_options& o) {
    cmd->add_option("--base", o.base_name, "Base learner")->check(CLI::IsMember({"ht", "hat"}));
    cmd->add_option("--mode", o.mode_name, "Variant to run")
        ->check(CLI::IsMember({"none", "kde", "hs", "kde+hs"}));
    cmd->add_option("--r-grid", o.r_grid, "Bin-range candidates (0 = one bin per target)")
        ->delimiter(',');
    cmd->add_option("--lambda-grid", o.lambda_grid, "Shrinkage candidates")->delimiter(',');
    cmd->add_option("--h-grid", o.h_grid, "Bandwidth candidates")->delimiter(',');
    cmd->add_option("--w-grid", o.w_grid, "Tumbling-window size candidates")->delimiter(',');
    cmd->add_option("--kernel", o.kernel_name, "KDE kernel")
        ->check(CLI::IsMember({"gaussian", "epanechnikov"}));
    cmd->add_option("--kde-distance", o.distance_name,
                    "Kernel distance units: raw label space or bin-index space")
        ->check(CLI::IsMember({"raw", "bin"}));
    cmd->add_option("--weight-floor", o.weight_floor, "Density floor before inversion");
    cmd->add_option("--tune-window", o.tune_window, "s_t override (default min(|S|/8, 3000))");
    cmd->add_option("--deploy-window", o.deploy_window,
                    "s_t' override (default spreads four tuning periods)");
    cmd->add_flag("--adopt-params-only", o.adopt_params_only,
                  "Winner adoption copies hyperparameters only, not model state");
    cmd->add_option("--split-delta", o.split_delta, "Hoeffding confidence delta");
    cmd->add_option("--grace", o.grace, "Weight units between split attempts");
    cmd->add_option("--tie-threshold", o.tie_threshold, "Split tie threshold tau");
    cmd->add_option("--adwin-delta", o.adwin_delta, "ADWIN cut confidence");
    cmd->add_option("--seed", o.seed, "Seed for synthetic sources");
    cmd->add_option("--threads", o.threads, "Grid fan-out threads inside tuning windows");
    cmd->add_option("--out", o.out, "Output directory for CSV artifacts");
    cmd->add_flag("--verbose", o.verbose, "Warnings + drift-event log");
    cmd->add_flag("--dump-density", o.dump_density, "Write final (bin center, weight) CSV");
}

run_config to_run_config(const cli_options& o) {
    run_config cfg;
    cfg.stream.path = o.dataset;
    cfg.stream.target_column = o.target_col;
    cfg.stream.drop_indices = o.drop_indices;
    if (o.max_examples > 0) cfg.stream.max_examples = o.max_examples;
    cfg.stream.transform = o.target_transform_name == "log1p" ? target_transform::log1p
                                                              : target_transform::identity;
    cfg.stream.missing = o.missing_policy_name == "impute-mean" ? missing_policy::impute_mean
                                                                : missing_policy::skip_row;
    if (!o.delimiter.empty()) cfg.stream.delimiter = o.delimiter[0];

    cfg.base = o.base_name == "hat" ? base_kind::hat : base_kind::ht;
    if (o.mode_name == "kde")
        cfg.mode = tune_mode::kde;
    else if (o.mode_name == "hs")
        cfg.mode = tune_mode::hs;
    else if (o.mode_name == "kde+hs")
        cfg.mode = tune_mode::kde_hs;
    else
        cfg.mode = tune_mode::none;

    cfg.grids.bin_ranges = o.r_grid;
    cfg.grids.lambdas = o.lambda_grid;
    cfg.grids.bandwidths = o.h_grid;
    cfg.grids.window_sizes = o.w_grid;
    cfg.kernel =
        o.kernel_name == "epanechnikov" ? kernel_kind::epanechnikov : kernel_kind::gaussian;
    cfg.distance = o.distance_name == "bin" ? kde_distance::bin : kde_distance::raw;
    cfg.weight_floor = o.weight_floor;

    cfg.tree.delta = o.split_delta;
    cfg.tree.grace_period = o.grace;
    cfg.tree.tie_threshold = o.tie_threshold;
    cfg.tree.drift.delta = o.adwin_delta;

    if (o.tune_window > 0) cfg.tune_window = o.tune_window;
    if (o.deploy_window > 0) cfg.deploy_window = o.deploy_window;
    cfg.adopt_full_state = !o.adopt_params_only;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.out_dir = o.out;
    cfg.verbose = o.verbose;
    cfg.dump_density = o.dump_density;
    return cfg;
}

// "name:path:target[:transform]"
named_dataset parse_dataset_arg(const std::string& arg, const cli_options& defaults) {
    std::vector<std::string> parts;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3)
        throw config_error("dataset spec must be name:path:target[:transform], got '" + arg + "'");
    named_dataset ds;
    ds.name = parts[0];
    ds.stream.path = parts[1];
    ds.stream.target_column = parts[2];
    ds.stream.transform = (parts.size() > 3 && parts[3] == "log1p") ? target_transform::log1p
                                                                    : target_transform::identity;
    ds.stream.missing = defaults.missing_policy_name == "impute-mean"
                            ? missing_policy::impute_mean
                            : missing_policy::skip_row;
    return ds;
}

int cmd_run(const cli_options& o) {
    const run_config cfg = to_run_config(o);
    const run_result res = run_experiment(cfg);
    std::printf("model,mae,rmse,r2\n");
    std::printf("%s,%.4f,%.4f,%.4f\n", res.model_name.c_str(), res.mae, res.rmse, res.r2);
    if (o.verbose) {
        std::fprintf(stderr, "examples=%lld tuning_windows=%lld\n",
                     static_cast<long long>(res.examples),
                     static_cast<long long>(res.tuning_windows));
        for (const auto& f : res.files_written) std::fprintf(stderr, "wrote %s\n", f.c_str());
    }
    return 0;
}

int cmd_matrix(const cli_options& o, const std::vector<std::string>& dataset_args) {
    if (dataset_args.empty()) {
        std::printf("no datasets given; nothing to do\n");
        return 0;
    }
    std::vector<named_dataset> datasets;
    for (const auto& arg : dataset_args) datasets.push_back(parse_dataset_arg(arg, o));
    run_config base_cfg = to_run_config(o);
    const auto results = run_matrix(datasets, base_cfg, o.out);
    std::printf("dataset_runs=%zu\n", results.size());
    for (const auto& r : results)
        std::printf("%s,%.4f,%.4f,%.4f\n", r.model_name.c_str(), r.mae, r.rmse, r.r2);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Imbalanced streaming regression with Hoeffding trees, incremental KDE "
                 "weighting, hierarchical shrinkage and FTL tuning"};
    app.require_subcommand(1);

    cli_options o;

    CLI::App* run = app.add_subcommand("run", "Run one dataset/variant experiment");
    run->add_option("--dataset", o.dataset, "CSV file with a header row")->required();
    run->add_option("--target-col", o.target_col, "Target column name or 0-based index")
        ->required();
    run->add_option("--drop-indices", o.drop_indices, "0-based data-row positions to skip")
        ->delimiter(',');
    run->add_option("--max-examples", o.max_examples, "Cap on yielded examples");
    run->add_option("--target-transform", o.target_transform_name, "identity or log1p")
        ->check(CLI::IsMember({"identity", "log1p"}));
    run->add_option("--missing-policy", o.missing_policy_name, "skip-row or impute-mean")
        ->check(CLI::IsMember({"skip-row", "impute-mean"}));
    run->add_option("--delimiter", o.delimiter, "CSV delimiter (default ',')");
    add_model_flags(run, o);

    std::vector<std::string> dataset_args;
    CLI::App* matrix = app.add_subcommand(
        "matrix", "Run all eight HT/HAT x {none,HS,KDE,KDE+HS} variants per dataset");
    matrix->add_option("--dataset", dataset_args, "Repeatable name:path:target[:transform]")
        ->take_all();
    matrix->add_option("--missing-policy", o.missing_policy_name, "skip-row or impute-mean")
        ->check(CLI::IsMember({"skip-row", "impute-mean"}));
    add_model_flags(matrix, o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(o);
        if (matrix->parsed()) return cmd_matrix(o, dataset_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
