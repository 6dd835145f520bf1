#include "dynsolow/integrator.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "dynsolow/equilibria.hpp"
#include "dynsolow/stochastic.hpp"
#include "dynsolow/version.hpp"

namespace dynsolow {

namespace {

struct StepPlan {
    std::int64_t n_steps;
    std::int64_t first_record;  // first recorded step index (>= burn_in)
    std::int64_t stride;
    std::int64_t n_samples;
};

StepPlan plan_steps(const SimConfig& cfg) {
    StepPlan plan;
    plan.n_steps = static_cast<std::int64_t>(std::llround(cfg.t_end / cfg.dt));
    if (plan.n_steps < 1) plan.n_steps = 1;
    plan.first_record = static_cast<std::int64_t>(std::ceil(cfg.burn_in / cfg.dt - 1e-9));
    if (plan.first_record < 0) plan.first_record = 0;
    plan.stride = cfg.record_stride;
    plan.n_samples = (plan.n_steps - plan.first_record) / plan.stride + 1;
    return plan;
}

void check_recorded_finite(std::initializer_list<double> values, std::int64_t step) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteState("non-finite recorded sample", step);
    }
}

TrajectoryManifest make_manifest(const ValidatedParams& p, const SimConfig& cfg) {
    return TrajectoryManifest{*p, cfg, kVersion};
}

// Noise source abstraction so the OU process and a pinned path share one loop.
struct NoiseSource {
    NoiseProcess* proc = nullptr;
    std::span<const double> path;
    double current = 0.0;

    double advance(std::int64_t step_index, double dt) {
        if (proc) {
            current = proc->step(dt);
        } else if (!path.empty()) {
            current = step_index + 1 < static_cast<std::int64_t>(path.size())
                          ? path[static_cast<std::size_t>(step_index + 1)]
                          : path.back();
        }
        return current;
    }
};

Trajectory run_full(const ValidatedParams& p, const SimConfig& cfg, NoiseSource noise) {
    if (cfg.regime_mode == RegimeMode::reduced_deterministic) {
        throw WrongMode("use simulate_reduced for reduced_deterministic mode");
    }
    const StepPlan plan = plan_steps(cfg);

    Trajectory traj;
    traj.manifest = make_manifest(p, cfg);
    traj.t.reserve(plan.n_samples);
    traj.y.reserve(plan.n_samples);
    traj.k_s.reserve(plan.n_samples);
    traj.k_d.reserve(plan.n_samples);
    traj.k.reserve(plan.n_samples);
    traj.s.reserve(plan.n_samples);
    traj.h.reserve(plan.n_samples);
    traj.xi.reserve(plan.n_samples);
    traj.demand_regime.reserve(plan.n_samples);

    FullState state;
    state.t = 0.0;
    state.y = cfg.initial.y0;
    state.k_s = cfg.initial.ks0;
    state.k_d = cfg.initial.kd0;
    state.s = cfg.initial.s0;
    state.h = cfg.initial.h0;
    state.xi = noise.current;

    for (std::int64_t i = 0; i <= plan.n_steps; ++i) {
        state.t = static_cast<double>(i) * cfg.dt;
        if (i >= plan.first_record && (i - plan.first_record) % plan.stride == 0) {
            double k = 0.0;
            switch (cfg.regime_mode) {
                case RegimeMode::general: k = clearing(state.k_s, state.k_d); break;
                case RegimeMode::forced_supply: k = state.k_s; break;
                case RegimeMode::forced_demand: k = state.k_d; break;
                case RegimeMode::reduced_deterministic: break;
            }
            check_recorded_finite({state.y, state.k_s, state.k_d, state.s, state.h, state.xi}, i);
            traj.t.push_back(state.t);
            traj.y.push_back(state.y);
            traj.k_s.push_back(state.k_s);
            traj.k_d.push_back(state.k_d);
            traj.k.push_back(k);
            traj.s.push_back(state.s);
            traj.h.push_back(state.h);
            traj.xi.push_back(state.xi);
            traj.demand_regime.push_back(feedback_gate(state.k_s, state.k_d) ? 1 : 0);
        }
        if (i == plan.n_steps) break;

        FullDerivatives d;
        try {
            d = rhs_full(state, p, cfg.regime_mode);
        } catch (const NonFiniteState& e) {
            throw NonFiniteState(e.what(), i);
        }
        state.y += cfg.dt * d.dy;
        state.k_s += cfg.dt * d.dk_s;
        state.k_d += cfg.dt * d.dk_d;
        state.s += cfg.dt * d.ds;
        state.h += cfg.dt * d.dh;
        state.xi = noise.advance(i, cfg.dt);
    }
    return traj;
}

}  // namespace

Trajectory simulate(const ValidatedParams& p, const SimConfig& cfg) {
    NoiseProcess proc(p->tau_xi, p->sigma_xi, mix_seed(cfg.seed, kNoiseStreamTag), cfg.initial.xi0);
    NoiseSource noise;
    noise.proc = &proc;
    noise.current = cfg.initial.xi0;
    return run_full(p, cfg, noise);
}

Trajectory simulate_with_noise(const ValidatedParams& p, const SimConfig& cfg,
                               std::span<const double> xi_steps) {
    NoiseSource noise;
    noise.path = xi_steps;
    noise.current = xi_steps.empty() ? 0.0 : xi_steps.front();
    return run_full(p, cfg, noise);
}

Trajectory simulate_reduced(const ValidatedParams& p, const SimConfig& cfg, bool xi_on) {
    if (cfg.regime_mode != RegimeMode::forced_demand &&
        cfg.regime_mode != RegimeMode::reduced_deterministic) {
        throw WrongMode("simulate_reduced requires forced_demand or reduced_deterministic mode");
    }
    const StepPlan plan = plan_steps(cfg);

    Trajectory traj;
    traj.reduced = true;
    traj.manifest = make_manifest(p, cfg);
    traj.t.reserve(plan.n_samples);
    traj.s.reserve(plan.n_samples);
    traj.h.reserve(plan.n_samples);
    traj.z.reserve(plan.n_samples);

    ReducedState state;
    state.s = cfg.initial.s0;
    state.h = cfg.initial.h0;
    state.z = p->rho * cfg.initial.kd0 - cfg.initial.y0;

    std::optional<NoiseProcess> proc;
    double xi = 0.0;
    if (xi_on) {
        proc.emplace(p->tau_xi, p->sigma_xi, mix_seed(cfg.seed, kNoiseStreamTag), cfg.initial.xi0);
        xi = cfg.initial.xi0;
    }

    for (std::int64_t i = 0; i <= plan.n_steps; ++i) {
        if (i >= plan.first_record && (i - plan.first_record) % plan.stride == 0) {
            check_recorded_finite({state.s, state.h, state.z}, i);
            traj.t.push_back(static_cast<double>(i) * cfg.dt);
            traj.s.push_back(state.s);
            traj.h.push_back(state.h);
            traj.z.push_back(state.z);
        }
        if (i == plan.n_steps) break;

        ReducedDerivatives d;
        try {
            d = rhs_reduced(state, p, xi);
        } catch (const NonFiniteState& e) {
            throw NonFiniteState(e.what(), i);
        }
        state.s += cfg.dt * d.ds;
        state.h += cfg.dt * d.dh;
        state.z += cfg.dt * d.dz;
        if (proc) xi = proc->step(cfg.dt);
    }
    return traj;
}

std::vector<PortraitResult> phase_portrait(const ValidatedParams& p,
                                           const std::vector<ReducedState>& grid,
                                           double t_end) {
    const std::vector<EquilibriumPoint> eqs = equilibria(p);

    std::vector<PortraitResult> results;
    results.reserve(grid.size());
    for (const ReducedState& start : grid) {
        SimConfig cfg;
        cfg.t_end = t_end;
        cfg.dt = 1.0;
        cfg.record_stride = 5;
        cfg.regime_mode = RegimeMode::reduced_deterministic;
        cfg.burn_in = 0.0;
        cfg.initial.s0 = start.s;
        cfg.initial.h0 = start.h;
        cfg.initial.kd0 = 1.0;
        cfg.initial.y0 = p->rho - start.z;  // z(0) = rho*kd0 - y0 = start.z

        PortraitResult res;
        res.traj = simulate_reduced(p, cfg, false);
        res.start = start;

        const std::size_t n = res.traj.size();
        const ReducedState terminal{res.traj.s[n - 1], res.traj.h[n - 1], res.traj.z[n - 1]};
        constexpr double kAttractorTol = 1e-3;
        for (std::size_t e = 0; e < eqs.size(); ++e) {
            const double dist = std::max({std::fabs(terminal.s - eqs[e].state.s),
                                          std::fabs(terminal.h - eqs[e].state.h),
                                          std::fabs(terminal.z - eqs[e].state.z)});
            if (dist < kAttractorTol) {
                res.attractor_index = static_cast<int>(e);
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%s(s=%.4f)", to_string(eqs[e].kind).c_str(),
                              eqs[e].state.s);
                res.label = buf;
                break;
            }
        }
        if (res.attractor_index < 0) {
            // Bounded recurrence in the second half marks a cycle.
            const std::size_t half = n / 2;
            double mean = 0.0;
            for (std::size_t j = half; j < n; ++j) mean += res.traj.s[j];
            mean /= static_cast<double>(n - half);
            int upward = 0;
            double max_dev = 0.0;
            for (std::size_t j = half + 1; j < n; ++j) {
                if (res.traj.s[j - 1] - mean < 0.0 && res.traj.s[j] - mean >= 0.0) ++upward;
                max_dev = std::max(max_dev, std::fabs(res.traj.s[j] - mean));
            }
            res.label = (upward >= 3 && max_dev > kAttractorTol) ? "cycle" : "unresolved";
        }
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace dynsolow
