#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "dynsolow/params.hpp"

using namespace dynsolow;

TEST_CASE("base case validates without warnings") {
    std::vector<std::string> warnings;
    const ValidatedParams p = validate(ModelParams{}, &warnings);
    CHECK(warnings.empty());
    CHECK(p->rho == doctest::Approx(1.0 / 3.0));
    CHECK(p->delta == doctest::Approx(2e-4));
    CHECK(p->gamma == doctest::Approx(2000.0));
}

TEST_CASE("hard invariant violations are rejected with the offending field") {
    ModelParams p;
    p.rho = 1.5;
    CHECK_THROWS_AS(validate(p), ShareOutOfRange);

    p = ModelParams{};
    p.tau_h = -1.0;
    CHECK_THROWS_AS(validate(p), NonPositiveTimescale);

    p = ModelParams{};
    p.epsilon = -1e-5;
    CHECK_THROWS_AS(validate(p), NegativeRate);

    p = ModelParams{};
    p.delta = 0.0;
    CHECK_THROWS_AS(validate(p), NegativeRate);

    p = ModelParams{};
    p.lambda = 1.2;
    CHECK_THROWS_AS(validate(p), ShareOutOfRange);
}

TEST_CASE("timescale ordering violations warn but pass") {
    ModelParams p;
    p.tau_h = 300.0;  // above tau_s = 250
    std::vector<std::string> warnings;
    CHECK_NOTHROW(validate(p, &warnings));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("ordering") != std::string::npos);
}

TEST_CASE("derived quantities") {
    SUBCASE("base case") {
        const auto d = derived_quantities(validate(ModelParams{}));
        CHECK(d.R == doctest::Approx(3.75e-5).epsilon(1e-12));
        CHECK(d.omega_y == doctest::Approx(1e-3).epsilon(1e-12));
        CHECK(d.tech_timescale == doctest::Approx(4e4).epsilon(1e-12));
    }
    SUBCASE("zero technology growth") {
        ModelParams p;
        p.epsilon = 0.0;
        const auto d = derived_quantities(validate(p));
        CHECK(d.R == 0.0);
        CHECK(std::isinf(d.tech_timescale));
    }
    SUBCASE("R increases in epsilon and rho") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            ModelParams a;
            a.epsilon = 1e-6 + 1e-4 * u(rng);
            a.rho = 0.05 + 0.9 * u(rng);
            ModelParams b = a;
            b.epsilon = a.epsilon * (1.0 + 0.5 * u(rng)) + 1e-9;
            ModelParams c = a;
            c.rho = a.rho + (0.999 - a.rho) * 0.5 * u(rng) + 1e-9;
            const double Ra = derived_quantities(validate(a)).R;
            CHECK(derived_quantities(validate(b)).R > Ra);
            CHECK(derived_quantities(validate(c)).R > Ra);
        }
    }
}

TEST_CASE("empty config yields the full base case") {
    const LoadedConfig cfg = load_config("");
    CHECK(cfg.params->rho == doctest::Approx(1.0 / 3.0));
    CHECK(cfg.params->c2 == doctest::Approx(7e-4));
    CHECK(cfg.params->tau_xi == doctest::Approx(5.0));
    CHECK(cfg.sim.dt == doctest::Approx(1.0));
    CHECK(cfg.sim.record_stride == 25);
    CHECK(cfg.overrides.empty());
    // z(0) = rho*kd0 - y0 = 0 by default
    CHECK(cfg.sim.initial.y0 == doctest::Approx(cfg.params->rho));
}

TEST_CASE("config overrides are applied and echoed") {
    const LoadedConfig cfg = load_config("# supercritical case\ngamma = 4000\nc2 = 1e-4\n");
    CHECK(cfg.params->gamma == doctest::Approx(4000.0));
    CHECK(cfg.params->c2 == doctest::Approx(1e-4));
    CHECK(cfg.params->rho == doctest::Approx(1.0 / 3.0));  // untouched default
    REQUIRE(cfg.overrides.size() == 2);
    CHECK(cfg.overrides[0] == "gamma");
    CHECK(cfg.overrides[1] == "c2");
}

TEST_CASE("config rejections") {
    CHECK_THROWS_AS(load_config("foo = 1\n"), UnknownKey);
    CHECK_THROWS_AS(load_config("gamma = abc\n"), MalformedValue);
    CHECK_THROWS_AS(load_config("rho = 1.5\n"), ShareOutOfRange);
    CHECK_THROWS_AS(load_config("initial_s0 = 1.5\n"), MalformedValue);
    CHECK_THROWS_AS(load_config("dt = 0\n"), MalformedValue);
    CHECK_THROWS_AS(load_config("burn_in = 2e6\n"), MalformedValue);
}

TEST_CASE("serialize/load round trip is exact") {
    const LoadedConfig cfg = load_config(
        "gamma = 4123.456789012345\n"
        "c2 = 9.87654321e-5\n"
        "epsilon = 2.5000000000000001e-05\n"
        "seed = 18446744073709551615\n"
        "regime_mode = forced_demand\n"
        "initial_s0 = -0.12345678901234567\n"
        "t_end = 33333\n");
    const std::string text = serialize_config(*cfg.params, cfg.sim);
    const LoadedConfig again = load_config(text);
    CHECK(serialize_config(*again.params, again.sim) == text);
    CHECK(again.params->gamma == cfg.params->gamma);
    CHECK(again.sim.seed == cfg.sim.seed);
    CHECK(again.sim.initial.s0 == cfg.sim.initial.s0);
    CHECK(again.sim.regime_mode == RegimeMode::forced_demand);
}
