#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynsolow/dynamics.hpp"
#include "dynsolow/params.hpp"

namespace dynsolow {

struct TrajectoryManifest {
    ModelParams params;
    SimConfig sim;
    std::string version;
};

// Decimated time series of a run. Immutable after creation; safe to move
// between workers. Full mode fills y..xi and the regime flags; reduced mode
// fills s, h, z only.
struct Trajectory {
    std::vector<double> t;
    std::vector<double> y, k_s, k_d, k, s, h, xi;
    std::vector<std::uint8_t> demand_regime;  // 1 when k_d <= k_s at the sample
    std::vector<double> z;
    bool reduced = false;
    TrajectoryManifest manifest;

    std::size_t size() const { return t.size(); }
};

// Explicit Euler over the five-equation system: derivatives evaluated at step
// start, all states advanced simultaneously, the OU value held constant within
// each step and advanced once per step by the exact map. Records every
// record_stride-th step once t >= burn_in. Deterministic given (params,
// config, seed). Throws NonFiniteState (with step index) on divergence.
Trajectory simulate(const ValidatedParams& p, const SimConfig& cfg);

// Same stepping with a caller-supplied noise path: xi_steps[i] is held over
// step i. Used to compare dt against dt/2 with noise generated on the coarse
// grid and held.
Trajectory simulate_with_noise(const ValidatedParams& p, const SimConfig& cfg,
                               std::span<const double> xi_steps);

// Integrates the (s, h, z) system; with xi_on = false it is autonomous.
// regime_mode must be forced_demand or reduced_deterministic.
Trajectory simulate_reduced(const ValidatedParams& p, const SimConfig& cfg, bool xi_on);

struct PortraitResult {
    Trajectory traj;
    ReducedState start;
    std::string label;        // "focus(s=...)" style, "cycle", or "unresolved"
    int attractor_index = -1; // index into equilibria(p), -1 if none
};

// One deterministic reduced trajectory per initial condition, each labeled by
// its terminal attractor (nearest equilibrium within 1e-3 in (s,h,z)) or
// "cycle" when non-convergent with bounded recurrence.
std::vector<PortraitResult> phase_portrait(const ValidatedParams& p,
                                           const std::vector<ReducedState>& grid,
                                           double t_end);

}  // namespace dynsolow
