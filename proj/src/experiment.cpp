#include "streamreg/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace streamreg {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, const char* spec = "%.6f") {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string mode_label(base_kind base, tune_mode mode) {
    std::string s = base == base_kind::ht ? "ht" : "hat";
    switch (mode) {
        case tune_mode::none: break;
        case tune_mode::kde: s += "_kde"; break;
        case tune_mode::hs: s += "_hs"; break;
        case tune_mode::kde_hs: s += "_kde_hs"; break;
    }
    return s;
}

std::string mode_display(base_kind base, tune_mode mode) {
    return variant_display_name(base, mode == tune_mode::kde || mode == tune_mode::kde_hs,
                                mode == tune_mode::hs || mode == tune_mode::kde_hs);
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write output file: " + path);
    out << content;
    written.push_back(path);
}

const char* action_name(drift_event::action a) {
    switch (a) {
        case drift_event::action::flag: return "flag";
        case drift_event::action::swap: return "swap";
        case drift_event::action::prune: return "prune-alternate";
    }
    return "?";
}

} // namespace

run_result run_experiment(const run_config& cfg) {
    if (cfg.metrics_stride < 1) throw config_error("metrics stride must be >= 1");
    loaded_stream data = open_stream(cfg.stream);
    if (data.examples.empty()) throw config_error("stream yielded no examples: " + cfg.stream.path);
    const auto stream_len = static_cast<std::int64_t>(data.examples.size());

    const std::int64_t s_t = cfg.tune_window ? *cfg.tune_window : default_tuning_window(stream_len);
    if (s_t <= 0)
        throw config_error("tuning window must be > 0 (stream too short for the default rule)");
    const std::int64_t s_tp =
        cfg.deploy_window ? *cfg.deploy_window : default_deploy_window(stream_len, s_t);
    auto schedule = schedule_phases(stream_len, s_t, s_tp);

    variant_config base_cfg;
    base_cfg.base = cfg.base;
    base_cfg.kernel = cfg.kernel;
    base_cfg.distance = cfg.distance;
    base_cfg.weight_floor = cfg.weight_floor;
    base_cfg.tree = cfg.tree;

    const std::size_t n_features = data.examples.front().features.size();
    ftl_tuner tuner = make_tuner(cfg.mode, cfg.grids, base_cfg, n_features, std::move(schedule),
                                 cfg.adopt_full_state, cfg.threads);

    prequential_tracker tracker(cfg.metrics_stride);

    std::ostringstream metrics_csv;
    metrics_csv << "seq,cum_mae,cum_rmse,cum_r2,win_mae,win_rmse,win_r2\n";
    auto emit_metrics = [&](std::int64_t seq) {
        const auto wm = tracker.windowed();
        metrics_csv << seq << ',' << fmt(tracker.mae()) << ',' << fmt(tracker.rmse()) << ','
                    << fmt(tracker.r2()) << ',' << fmt(wm.mae) << ',' << fmt(wm.rmse) << ','
                    << fmt(wm.r2) << '\n';
    };

    for (const labeled_example& ex : data.examples) {
        const prediction p = tuner.step(ex);
        tracker.record(p.value, ex.target);
        if (ex.seq % static_cast<std::int64_t>(cfg.metrics_stride) == 0) emit_metrics(ex.seq);
    }
    if (stream_len % static_cast<std::int64_t>(cfg.metrics_stride) != 0) emit_metrics(stream_len);

    run_result res;
    res.model_name = mode_display(cfg.base, cfg.mode);
    res.examples = stream_len;
    res.mae = tracker.mae();
    res.rmse = tracker.rmse();
    res.r2 = tracker.r2();
    res.tuning_windows = static_cast<std::int64_t>(tuner.log().size());

    if (cfg.out_dir.empty()) return res;

    const fs::path dir(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + cfg.out_dir);
    const std::string label = mode_label(cfg.base, cfg.mode);

    try {
        write_file((dir / (label + "_metrics.csv")).string(), metrics_csv.str(),
                   res.files_written);

        std::ostringstream tuning_csv;
        tuning_csv << "window,r,lambda,h,w,error\n";
        for (const auto& row : tuner.log()) {
            tuning_csv << row.window_index << ',' << fmt(row.params.bin_range, "%g") << ','
                       << fmt(row.params.lambda, "%g") << ',' << fmt(row.params.bandwidth, "%g")
                       << ',' << row.params.window_size << ',' << fmt(row.error) << '\n';
        }
        write_file((dir / (label + "_tuning_log.csv")).string(), tuning_csv.str(),
                   res.files_written);

        std::ostringstream summary_csv;
        summary_csv << "model,mae,rmse,r2\n";
        summary_csv << res.model_name << ',' << fmt(res.mae, "%.4f") << ','
                    << fmt(res.rmse, "%.4f") << ',' << fmt(res.r2, "%.4f") << '\n';
        write_file((dir / (label + "_summary.csv")).string(), summary_csv.str(),
                   res.files_written);

        const auto* deployed = dynamic_cast<const variant_model*>(&tuner.deployed());
        if (cfg.verbose && cfg.base == base_kind::hat && deployed) {
            std::ostringstream drift_csv;
            drift_csv << "seq,node_id,action\n";
            for (const drift_event& ev : deployed->tree().drift_log())
                drift_csv << ev.seq << ',' << ev.node_id << ',' << action_name(ev.what) << '\n';
            write_file((dir / (label + "_drift_events.csv")).string(), drift_csv.str(),
                       res.files_written);
        }
        if (cfg.dump_density && deployed && deployed->density()) {
            const smoothed_density& d = *deployed->density();
            std::ostringstream density_csv;
            density_csv << "bin_center,weight,observed\n";
            for (std::size_t b = 0; b < d.bins().size(); ++b)
                density_csv << fmt(d.bins().center(b), "%.10g") << ',' << fmt(d.weight(b), "%.10g")
                            << ',' << fmt(d.observed(b), "%g") << '\n';
            write_file((dir / (label + "_density.csv")).string(), density_csv.str(),
                       res.files_written);
        }
    } catch (...) {
        for (const std::string& f : res.files_written) fs::remove(f, ec);
        throw;
    }
    return res;
}

std::vector<run_result> run_matrix(const std::vector<named_dataset>& datasets,
                                   const run_config& base_cfg, const std::string& out_dir) {
    std::vector<run_result> results;
    if (datasets.empty()) return results;

    static constexpr base_kind bases[] = {base_kind::ht, base_kind::hat};
    static constexpr tune_mode modes[] = {tune_mode::none, tune_mode::hs, tune_mode::kde,
                                          tune_mode::kde_hs};

    std::ostringstream matrix_csv;
    matrix_csv << "dataset,model,mae,rmse,r2,best_mae,best_rmse,best_r2\n";

    for (const named_dataset& ds : datasets) {
        std::vector<run_result> block;
        for (tune_mode mode : modes) {
            for (base_kind base : bases) {
                run_config cfg = base_cfg;
                cfg.stream = ds.stream;
                cfg.base = base;
                cfg.mode = mode;
                if (!out_dir.empty())
                    cfg.out_dir = (fs::path(out_dir) / ds.name).string();
                try {
                    block.push_back(run_experiment(cfg));
                } catch (const std::exception& e) {
                    throw io_error("matrix run failed for dataset=" + ds.name +
                                   " model=" + mode_display(base, mode) + ": " + e.what());
                }
            }
        }
        // Flag the best value per metric column within this dataset.
        auto best_ix = [&](auto key, bool maximize) {
            std::size_t best = 0;
            for (std::size_t i = 1; i < block.size(); ++i) {
                const double a = key(block[i]), b = key(block[best]);
                if (std::isnan(a)) continue;
                if (std::isnan(b) || (maximize ? a > b : a < b)) best = i;
            }
            return best;
        };
        const std::size_t bm = best_ix([](const run_result& r) { return r.mae; }, false);
        const std::size_t br = best_ix([](const run_result& r) { return r.rmse; }, false);
        const std::size_t b2 = best_ix([](const run_result& r) { return r.r2; }, true);
        for (std::size_t i = 0; i < block.size(); ++i) {
            matrix_csv << ds.name << ',' << block[i].model_name << ',' << fmt(block[i].mae, "%.4f")
                       << ',' << fmt(block[i].rmse, "%.4f") << ',' << fmt(block[i].r2, "%.4f")
                       << ',' << (i == bm ? 1 : 0) << ',' << (i == br ? 1 : 0) << ','
                       << (i == b2 ? 1 : 0) << '\n';
            results.push_back(std::move(block[i]));
        }
    }

    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        std::vector<std::string> written;
        write_file((fs::path(out_dir) / "matrix_summary.csv").string(), matrix_csv.str(), written);
    }
    return results;
}

} // namespace streamreg
