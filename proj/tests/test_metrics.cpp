#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "streamreg/metrics.hpp"

using namespace streamreg;

namespace {

struct naive_metrics {
    double mae = 0.0, rmse = 0.0, r2 = 0.0;
};

// Full-replay oracle, no incremental state.
naive_metrics recompute(const std::vector<std::pair<double, double>>& pairs) {
    naive_metrics m;
    double abs_sum = 0.0, sq_sum = 0.0, y_mean = 0.0;
    for (auto& [p, y] : pairs) {
        abs_sum += std::fabs(p - y);
        sq_sum += (p - y) * (p - y);
        y_mean += y;
    }
    const double n = static_cast<double>(pairs.size());
    y_mean /= n;
    double sst = 0.0;
    for (auto& [p, y] : pairs) sst += (y - y_mean) * (y - y_mean);
    m.mae = abs_sum / n;
    m.rmse = std::sqrt(sq_sum / n);
    m.r2 = sst > 0.0 ? 1.0 - sq_sum / sst : std::numeric_limits<double>::quiet_NaN();
    return m;
}

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max({std::fabs(got), std::fabs(want), 1e-300});
}

} // namespace

TEST_CASE("single perfect record") {
    prequential_tracker t;
    t.record(3.0, 3.0);
    CHECK(t.mae() == 0.0);
    CHECK(t.rmse() == 0.0);
}

TEST_CASE("hand-computed two records") {
    prequential_tracker t;
    t.record(1.0, 2.0);
    t.record(3.0, 5.0);
    CHECK(t.mae() == doctest::Approx(1.5));
    CHECK(t.rmse() == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
}

TEST_CASE("constant predictor at the target mean scores R2 = 0") {
    prequential_tracker t;
    for (double y : {1.0, 2.0, 3.0}) t.record(2.0, y);
    CHECK(t.r2() == doctest::Approx(0.0));
}

TEST_CASE("cumulative and windowed metrics match the brute-force oracle") {
    std::mt19937 rng(2024);
    std::normal_distribution<double> g(0.0, 2.0);
    prequential_tracker t(1000);
    std::vector<std::pair<double, double>> all;
    for (int i = 0; i < 10000; ++i) {
        const double y = g(rng);
        const double p = y + g(rng) * 0.5;
        t.record(p, y);
        all.push_back({p, y});
    }
    const naive_metrics cum = recompute(all);
    CHECK(rel_err(t.mae(), cum.mae) < 1e-9);
    CHECK(rel_err(t.rmse(), cum.rmse) < 1e-9);
    CHECK(rel_err(t.r2(), cum.r2) < 1e-9);

    const std::vector<std::pair<double, double>> tail(all.end() - 1000, all.end());
    const naive_metrics win = recompute(tail);
    const auto wm = t.windowed();
    CHECK(rel_err(wm.mae, win.mae) < 1e-9);
    CHECK(rel_err(wm.rmse, win.rmse) < 1e-9);
    CHECK(rel_err(wm.r2, win.r2) < 1e-9);
}

TEST_CASE("window covers exactly the trailing 1000 records") {
    prequential_tracker t(1000);
    for (int i = 0; i < 500; ++i) t.record(7.0, 0.0); // error 7, must age out
    for (int i = 0; i < 1000; ++i) t.record(static_cast<double>(i % 2), -1.0 + (i % 2));
    // trailing window holds the latter 1000 records only, each with error 1
    CHECK(t.windowed().mae == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.count() == 1500);
}

TEST_CASE("alternating errors converge to windowed MAE 1") {
    prequential_tracker t(1000);
    for (int i = 0; i < 4321; ++i) t.record(i % 2 ? 2.0 : 0.0, 0.0);
    CHECK(std::fabs(t.windowed().mae - 1.0) < 1e-12);
}

TEST_CASE("windowed R2 edge cases") {
    prequential_tracker perfect(8);
    for (double y : {1.0, 2.0, 3.0, 4.0}) perfect.record(y, y);
    CHECK(perfect.windowed().r2 == doctest::Approx(1.0));

    prequential_tracker flat(8);
    for (int i = 0; i < 4; ++i) flat.record(1.0 + i, 5.0); // identical targets
    CHECK(std::isnan(flat.windowed().r2)); // undefined sentinel, not 0

    prequential_tracker empty;
    CHECK_THROWS_AS(empty.windowed(), empty_state_error);
    CHECK_THROWS_AS(empty.mae(), empty_state_error);
}
