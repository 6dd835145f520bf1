#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "dynsolow/analysis.hpp"
#include "dynsolow/equilibria.hpp"
#include "dynsolow/runner.hpp"
#include "dynsolow/stochastic.hpp"

using namespace dynsolow;

TEST_CASE("parallel runner covers every index exactly once") {
    std::vector<int> hits(1000, 0);
    run_indexed(hits.size(), 8, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
}

TEST_CASE("seed ensemble: serial and parallel runs are bit-identical") {
    const ValidatedParams p = validate(ModelParams{});
    constexpr int kRuns = 8;

    const auto run_ensemble = [&](int parallel) {
        std::vector<std::vector<double>> paths(kRuns);
        run_indexed(kRuns, parallel, [&](std::size_t i) {
            SimConfig cfg;
            cfg.t_end = 25000.0;
            cfg.regime_mode = RegimeMode::forced_demand;
            cfg.seed = mix_seed(31337, i);
            paths[i] = simulate(p, cfg).k_d;
        });
        return paths;
    };

    const auto serial = run_ensemble(1);
    const auto parallel = run_ensemble(4);
    REQUIRE(serial.size() == parallel.size());
    for (int i = 0; i < kRuns; ++i) {
        REQUIRE(serial[i].size() == parallel[i].size());
        for (std::size_t j = 0; j < serial[i].size(); ++j) {
            CHECK(serial[i][j] == parallel[i][j]);
        }
    }
}

TEST_CASE("bifurcation scan: parallelism does not change the records") {
    const ValidatedParams p = validate(ModelParams{});
    const std::vector<double> gammas{350.0, 2000.0, 4000.0};
    const std::vector<double> c2s{1e-4, 7e-4};
    const auto serial = bifurcation_scan(p, gammas, c2s, 1, 250.0 * 400.0);
    const auto parallel = bifurcation_scan(p, gammas, c2s, 4, 250.0 * 400.0);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].gamma == parallel[i].gamma);
        CHECK(serial[i].c2 == parallel[i].c2);
        CHECK(serial[i].points.size() == parallel[i].points.size());
        CHECK(serial[i].cycle.has_value() == parallel[i].cycle.has_value());
        if (serial[i].cycle) {
            CHECK(serial[i].cycle->period_days == parallel[i].cycle->period_days);
            CHECK(serial[i].cycle->amplitude_s == parallel[i].cycle->amplitude_s);
        }
        for (std::size_t j = 0; j < serial[i].points.size(); ++j) {
            CHECK(serial[i].points[j].state.s == parallel[i].points[j].state.s);
        }
    }
}
