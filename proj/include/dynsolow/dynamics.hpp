#pragma once

#include <array>

#include "dynsolow/params.hpp"

namespace dynsolow {

// Instantaneous state of the general-case system. s and h stay in (-1,1)
// along any valid trajectory; the tanh dynamics force derivatives inward at
// the boundary.
struct FullState {
    double t = 0.0;    // days
    double y = 0.0;    // log output
    double k_s = 0.0;  // log capital supply
    double k_d = 0.0;  // log capital demand
    double s = 0.0;    // sentiment
    double h = 0.0;    // information
    double xi = 0.0;   // news noise (advanced by the noise process, not here)
};

struct FullDerivatives {
    double dy = 0.0;
    double dk_s = 0.0;
    double dk_d = 0.0;
    double ds = 0.0;
    double dh = 0.0;
};

// State of the demand-driven autonomous system, z = rho*k_d + eps*t - y.
struct ReducedState {
    double s = 0.0;
    double h = 0.0;
    double z = 0.0;
};

struct ReducedDerivatives {
    double ds = 0.0;
    double dh = 0.0;
    double dz = 0.0;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

// Arguments of state-difference exponentials are clamped here; reaching the
// clamp is treated as a divergent run (NonFiniteState), never saturated.
inline constexpr double kExpArgLimit = 50.0;

// Inelastic market clearing: invested log capital k = min(k_s, k_d).
double clearing(double k_s, double k_d);

// Feedback gate H: 1 if k_d <= k_s (demand-driven), else 0.
int feedback_gate(double k_s, double k_d);

// Right-hand side of the five-equation general-case system. The capital
// driving production and the gate H follow regime_mode: general uses
// clearing/gate, forced_supply pins k = k_s, H = 0, forced_demand pins
// k = k_d, H = 1. Depreciation acts on the production capital capped by
// supply, min(k, k_s). dy is substituted analytically into the h-equation,
// never differenced. Throws NonFiniteState on non-finite input or a clamped
// exponential; WrongMode for reduced_deterministic.
FullDerivatives rhs_full(const FullState& state, const ValidatedParams& p, RegimeMode mode);

// Right-hand side of the (s, h, z) system; ds is substituted into dz.
ReducedDerivatives rhs_reduced(const ReducedState& state, const ValidatedParams& p, double xi);

// Exact Jacobian of rhs_reduced at xi = 0, rows (ds, dh, dz) by columns
// (s, h, z), including the chain through ds in the dz row.
Matrix3 jacobian_reduced(const ReducedState& state, const ValidatedParams& p);

// Closed-form boundary-layer output path of the supply-driven economy,
// valid for t >= O(tau_y) under tau_y * delta >> 1.
double analytic_supply_path(double t, const ValidatedParams& p, double B);

// Second derivative of capital from the single second-order supply ODE
// tau_y*K'' + (1 + tau_y*delta)*K' + delta*K = lambda*K^rho*e^(eps*t).
double supply_ode_rhs(double K, double Kdot, double t, const ValidatedParams& p);

}  // namespace dynsolow
