#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dynsolow/equilibria.hpp"
#include "dynsolow/integrator.hpp"
#include "dynsolow/io.hpp"
#include "dynsolow/stochastic.hpp"

using namespace dynsolow;

namespace {
const ValidatedParams kBase = validate(ModelParams{});
}

TEST_CASE("exact fixed point is preserved") {
    ModelParams mp;
    mp.sigma_xi = 0.0;
    mp.epsilon = 0.0;
    const ValidatedParams p = validate(mp);
    SimConfig cfg;
    cfg.t_end = 5000.0;
    cfg.regime_mode = RegimeMode::general;
    // defaults: s0 = h0 = 0, ks0 = kd0 = 1, y0 = rho -> z = 0
    cfg.initial.y0 = mp.rho;
    const Trajectory traj = simulate(p, cfg);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(traj.s[i] == 0.0);
        CHECK(traj.h[i] == 0.0);
        const double z = mp.rho * traj.k_d[i] - traj.y[i];
        CHECK(z == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("determinism: identical inputs give bit-identical trajectories") {
    SimConfig cfg;
    cfg.t_end = 25000.0;
    cfg.seed = 909;
    const Trajectory a = simulate(kBase, cfg);
    const Trajectory b = simulate(kBase, cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.y[i] == b.y[i]);
        CHECK(a.k_s[i] == b.k_s[i]);
        CHECK(a.k_d[i] == b.k_d[i]);
        CHECK(a.s[i] == b.s[i]);
        CHECK(a.h[i] == b.h[i]);
        CHECK(a.xi[i] == b.xi[i]);
    }
}

TEST_CASE("recording grid: uniform spacing, burn-in discard") {
    SimConfig cfg;
    cfg.t_end = 1000.0;
    cfg.record_stride = 10;
    cfg.burn_in = 105.0;
    const Trajectory traj = simulate(kBase, cfg);
    REQUIRE(traj.size() > 2);
    CHECK(traj.t.front() == doctest::Approx(105.0));
    for (std::size_t i = 1; i < traj.size(); ++i) {
        CHECK(traj.t[i] - traj.t[i - 1] == doctest::Approx(10.0));
    }
    CHECK(traj.t.back() <= 1000.0);
}

TEST_CASE("regime flag is k_d <= k_s at each sample") {
    SimConfig cfg;
    cfg.t_end = 50000.0;
    cfg.seed = 4;
    const Trajectory traj = simulate(kBase, cfg);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK((traj.demand_regime[i] == 1) == (traj.k_d[i] <= traj.k_s[i]));
        CHECK(traj.k[i] == doctest::Approx(std::min(traj.k_s[i], traj.k_d[i])));
    }
}

TEST_CASE("boundedness in forced_demand over 1e6 steps") {
    SimConfig cfg;
    cfg.t_end = 1e6;
    cfg.regime_mode = RegimeMode::forced_demand;
    cfg.seed = 17;
    cfg.record_stride = 100;
    const Trajectory traj = simulate(kBase, cfg);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(std::fabs(traj.s[i]) < 1.0);
        CHECK(std::fabs(traj.h[i]) < 1.0);
        const double z = kBase->rho * traj.k_d[i] + kBase->epsilon * traj.t[i] - traj.y[i];
        CHECK(std::fabs(z) < 10.0);
    }
}

TEST_CASE("full forced_demand run tracks the reduced system given the same noise") {
    SimConfig cfg;
    cfg.t_end = 100000.0;
    cfg.regime_mode = RegimeMode::forced_demand;
    cfg.seed = 2024;
    cfg.record_stride = 25;
    const Trajectory full = simulate(kBase, cfg);
    const Trajectory red = simulate_reduced(kBase, cfg, true);
    REQUIRE(full.size() == red.size());
    for (std::size_t i = 0; i < full.size(); ++i) {
        const double z_full = kBase->rho * full.k_d[i] + kBase->epsilon * full.t[i] - full.y[i];
        CHECK(z_full == doctest::Approx(red.z[i]).epsilon(1e-9));
        CHECK(full.s[i] == doctest::Approx(red.s[i]).epsilon(1e-9));
        CHECK(full.h[i] == doctest::Approx(red.h[i]).epsilon(1e-9));
    }
}

TEST_CASE("self-convergence under dt halving with the coarse noise held") {
    // Build a coarse-grid OU path, then feed it to both resolutions.
    SimConfig coarse;
    coarse.t_end = 20000.0;
    coarse.dt = 1.0;
    coarse.record_stride = 25;
    coarse.seed = 5;

    const std::int64_t n_steps = 20000;
    std::vector<double> xi(n_steps + 1);
    NoiseProcess proc(kBase->tau_xi, kBase->sigma_xi, 777);
    xi[0] = 0.0;
    for (std::int64_t i = 1; i <= n_steps; ++i) xi[i] = proc.step(1.0);

    SimConfig fine = coarse;
    fine.dt = 0.5;
    fine.record_stride = 50;
    std::vector<double> xi_fine(2 * n_steps + 1);
    for (std::int64_t i = 0; i <= 2 * n_steps; ++i) xi_fine[i] = xi[i / 2];

    const Trajectory a = simulate_with_noise(kBase, coarse, xi);
    const Trajectory b = simulate_with_noise(kBase, fine, xi_fine);
    REQUIRE(a.size() == b.size());

    // O(dt) global error: halving dt should change the endpoint by less than
    // a generous multiple of dt.
    const std::size_t last = a.size() - 1;
    CHECK(std::fabs(a.y[last] - b.y[last]) < 0.05);
    CHECK(std::fabs(a.s[last] - b.s[last]) < 0.05);
    CHECK(std::fabs(a.k_d[last] - b.k_d[last]) < 0.05);
}

TEST_CASE("reduced mode rejects wrong regime") {
    SimConfig cfg;
    cfg.regime_mode = RegimeMode::general;
    CHECK_THROWS_AS(simulate_reduced(kBase, cfg, true), WrongMode);
    cfg.regime_mode = RegimeMode::reduced_deterministic;
    CHECK_THROWS_AS(simulate(kBase, cfg), WrongMode);
}

TEST_CASE("divergent run raises NonFiniteState with a step index") {
    ModelParams mp;
    mp.tau_y = 1e-3;  // absurd production timescale blows up immediately
    mp.tau_s = 2e-3;
    mp.tau_h = 1.5e-3;
    mp.tau_xi = 1e-4;
    const ValidatedParams p = validate(mp);
    SimConfig cfg;
    cfg.t_end = 1000.0;
    cfg.initial.kd0 = 30.0;
    cfg.initial.ks0 = 30.0;
    cfg.initial.y0 = -30.0;
    try {
        simulate(p, cfg);
        FAIL("expected NonFiniteState");
    } catch (const NonFiniteState& e) {
        CHECK(e.step >= 0);
    }
}

TEST_CASE("trajectory CSV round trip") {
    SimConfig cfg;
    cfg.t_end = 2000.0;
    cfg.seed = 3;
    const Trajectory traj = simulate(kBase, cfg);
    std::stringstream buf;
    write_trajectory_csv(traj, buf);
    const Trajectory back = read_trajectory_csv(buf);
    REQUIRE(back.size() == traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(back.t[i] == traj.t[i]);
        CHECK(back.y[i] == traj.y[i]);
        CHECK(back.xi[i] == traj.xi[i]);
        CHECK(back.demand_regime[i] == traj.demand_regime[i]);
    }

    cfg.regime_mode = RegimeMode::reduced_deterministic;
    const Trajectory red = simulate_reduced(kBase, cfg, false);
    std::stringstream buf2;
    write_trajectory_csv(red, buf2);
    const Trajectory back2 = read_trajectory_csv(buf2);
    REQUIRE(back2.reduced);
    REQUIRE(back2.size() == red.size());
    for (std::size_t i = 0; i < red.size(); ++i) CHECK(back2.z[i] == red.z[i]);
}

TEST_CASE("manifest text is loadable and reproduces the run") {
    SimConfig cfg;
    cfg.t_end = 5000.0;
    cfg.seed = 88;
    cfg.regime_mode = RegimeMode::forced_demand;
    const Trajectory traj = simulate(kBase, cfg);
    const std::string manifest = manifest_text(traj.manifest, ManifestInfo{{"seed"}, 1.23, {"trajectory.csv"}});
    const LoadedConfig cfg2 = load_config(manifest);
    const Trajectory again = simulate(cfg2.params, cfg2.sim);
    REQUIRE(again.size() == traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
        CHECK(again.y[i] == traj.y[i]);
        CHECK(again.xi[i] == traj.xi[i]);
    }
}

TEST_CASE("reduced noise-driven run shows the bi-stable dwell-and-switch pattern") {
    SimConfig cfg;
    cfg.t_end = 250.0 * 2000.0;
    cfg.regime_mode = RegimeMode::forced_demand;
    cfg.seed = 61;
    const Trajectory traj = simulate_reduced(kBase, cfg, true);
    int switches = 0;
    std::size_t dwelling = 0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if ((traj.s[i - 1] < 0.0) != (traj.s[i] < 0.0)) ++switches;
        if (std::fabs(traj.s[i]) > 0.2) ++dwelling;
    }
    CHECK(switches >= 4);  // several regime transitions over 2000 years
    CHECK(static_cast<double>(dwelling) / traj.size() > 0.6);  // mostly near an attractor
}

TEST_CASE("phase portrait labels attractors and cycles") {
    SUBCASE("base case: every grid point ends at a stable focus") {
        const std::vector<ReducedState> grid{{-0.6, -0.6, -0.05}, {0.6, 0.6, 0.05}, {0.3, -0.3, 0.0}};
        const auto eqs = equilibria(kBase);
        const auto results = phase_portrait(kBase, grid, 250.0 * 400.0);
        for (const auto& res : results) {
            CAPTURE(res.label);
            CHECK(res.attractor_index >= 0);
        }
        // The negative start falls into the contraction focus, the positive
        // one into the expansion focus.
        REQUIRE(results[0].attractor_index >= 0);
        CHECK(eqs[results[0].attractor_index].state.s < 0.0);
        REQUIRE(results[1].attractor_index >= 0);
        CHECK(eqs[results[1].attractor_index].state.s > 0.0);
    }
    SUBCASE("supercritical case: labeled cycle") {
        ModelParams mp;
        mp.gamma = 4000.0;
        mp.c2 = 1e-4;
        const ValidatedParams p = validate(mp);
        const std::vector<ReducedState> grid{{0.5, 0.5, 0.1}};
        const auto results = phase_portrait(p, grid, 250.0 * 400.0);
        REQUIRE(results.size() == 1);
        CHECK(results[0].label == "cycle");
    }
    SUBCASE("grid point at a stable focus stays there") {
        // The positive-sentiment equilibrium of the base case.
        const auto eqs = equilibria(kBase);
        REQUIRE(eqs.size() == 3);
        const std::vector<ReducedState> grid{eqs[2].state};
        const auto results = phase_portrait(kBase, grid, 250.0 * 100.0);
        CHECK(results[0].attractor_index == 2);
    }
}
