#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "streamreg/relevance.hpp"

using namespace streamreg;

TEST_CASE("inversion + mean-1 rescale, hand example") {
    // f = (0.8, 0.2) -> raw (1.25, 5.0) -> mean 3.125 -> (0.4, 1.6)
    std::vector<double> f{0.8, 0.2};
    std::vector<double> observed{1.0, 1.0};
    auto map = relevance_map::from_weights(f, observed, 1e-6);
    CHECK(map.weight_at(0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(map.weight_at(1) == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("uniform density gives exactly neutral weights") {
    // four far-apart values, compact-support kernel: all bins get equal mass
    smoothed_density d(bin_structure::lazy(), kernel_kind::epanechnikov, 0.5);
    for (double v : {0.0, 10.0, 20.0, 30.0}) d.update(v);
    auto map = relevance_map::from_density(d, 1e-6);
    REQUIRE(map.size() == 4);
    for (std::size_t b = 0; b < 4; ++b) CHECK(map.weight_at(b) == 1.0);
    // and a tree fed weight 1.0 is literally the unweighted tree
    CHECK(map.example_weight(d.bins(), 10.0) == 1.0);
}

TEST_CASE("monotone: denser bins never outweigh rarer ones") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.01, 2.0);
    std::vector<double> f(16);
    std::vector<double> observed(16, 1.0);
    for (double& v : f) v = u(rng);
    auto map = relevance_map::from_weights(f, observed, 1e-6);
    for (std::size_t a = 0; a < f.size(); ++a)
        for (std::size_t b = 0; b < f.size(); ++b)
            if (f[a] <= f[b]) CHECK(map.weight_at(a) >= map.weight_at(b));
}

TEST_CASE("mean over observed bins is 1") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<double> f(20);
    std::vector<double> observed(20, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = u(rng);
        observed[i] = i % 3 == 0 ? 1.0 : 0.0; // only some bins saw targets
    }
    auto map = relevance_map::from_weights(f, observed, 1e-6);
    double mean = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (observed[i] > 0) {
            mean += map.weight_at(i);
            ++n;
        }
    mean /= static_cast<double>(n);
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(map.weight_at(i) > 0.0);
}

TEST_CASE("rarest bin of a skewed density carries the largest weight") {
    smoothed_density d(bin_structure::lattice(0.0, 4.0, 1.0), kernel_kind::epanechnikov, 0.4);
    std::vector<double> window;
    for (int i = 0; i < 90; ++i) window.push_back(0.5); // dense head
    for (int i = 0; i < 3; ++i) window.push_back(3.5);  // rare tail
    d.process_window(window);
    auto map = relevance_map::from_density(d, 1e-6);
    CHECK(map.example_weight(d.bins(), 3.6) > map.example_weight(d.bins(), 0.4));
    double best = 0.0;
    for (std::size_t b = 0; b < map.size(); ++b) best = std::max(best, map.weight_at(b));
    // among observed bins, the tail bin is the heaviest
    CHECK(map.example_weight(d.bins(), 3.6) ==
          doctest::Approx(map.weight_at(*d.bins().find(3.6))));
    CHECK(map.weight_at(*d.bins().find(3.6)) >= map.weight_at(*d.bins().find(0.4)));
    (void)best;
}

TEST_CASE("unseen lazy bin falls back to neutral weight") {
    smoothed_density d(bin_structure::lazy(), kernel_kind::gaussian, 1.0);
    d.update(1.0);
    d.update(2.0);
    auto map = relevance_map::from_density(d, 1e-6);
    CHECK(map.example_weight(d.bins(), 99.0) == 1.0); // never seen
    CHECK(map.example_weight(d.bins(), 1.0) != 1.0);

    relevance_map empty;
    CHECK(empty.example_weight(d.bins(), 1.0) == 1.0);
}

TEST_CASE("error cases") {
    smoothed_density d(bin_structure::lazy(), kernel_kind::gaussian, 1.0);
    CHECK_THROWS_AS(relevance_map::from_density(d, 1e-6), empty_state_error);
    d.update(0.0);
    CHECK_THROWS_AS(relevance_map::from_density(d, 0.0), config_error);
    CHECK_THROWS_AS(relevance_map::from_density(d, -1.0), config_error);

    std::vector<double> zeros{0.0, 0.0};
    std::vector<double> obs{1.0, 1.0};
    CHECK_THROWS_AS(relevance_map::from_weights(zeros, obs, 1e-6), empty_state_error);
}
