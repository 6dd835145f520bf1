#include "dynsolow/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace dynsolow {

namespace {

// e^x with the divergence guard: a state whose exponent argument reaches the
// clamp is already unphysical, so flag it instead of saturating.
double guarded_exp(double x) {
    if (!std::isfinite(x)) throw NonFiniteState("non-finite exponent argument");
    if (x >= kExpArgLimit) throw NonFiniteState("exponent argument reached clamp e^50");
    return std::exp(x);
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw NonFiniteState(std::string("non-finite ") + name);
}

}  // namespace

double clearing(double k_s, double k_d) {
    return std::min(k_s, k_d);
}

int feedback_gate(double k_s, double k_d) {
    return k_d <= k_s ? 1 : 0;
}

FullDerivatives rhs_full(const FullState& state, const ValidatedParams& p, RegimeMode mode) {
    require_finite(state.t, "t");
    require_finite(state.y, "y");
    require_finite(state.k_s, "k_s");
    require_finite(state.k_d, "k_d");
    require_finite(state.s, "s");
    require_finite(state.h, "h");
    require_finite(state.xi, "xi");

    double k = 0.0;  // capital driving production (forced in the enforced regimes)
    double gate = 0.0;
    switch (mode) {
        case RegimeMode::general:
            k = clearing(state.k_s, state.k_d);
            gate = static_cast<double>(feedback_gate(state.k_s, state.k_d));
            break;
        case RegimeMode::forced_supply:
            k = state.k_s;
            gate = 0.0;
            break;
        case RegimeMode::forced_demand:
            k = state.k_d;
            gate = 1.0;
            break;
        case RegimeMode::reduced_deterministic:
            throw WrongMode("rhs_full does not apply to reduced_deterministic mode");
    }
    // Depreciation acts on the capital in production, capped by what
    // households own. The cap only binds in the enforced-demand experiment
    // when k_d is pinned above k_s; without it those runs diverge in finite
    // time once k_d - y exceeds ln(lambda/delta).
    const double k_invested = std::min(k, state.k_s);

    FullDerivatives d;
    d.dy = (guarded_exp(p->rho * k + p->epsilon * state.t - state.y) - 1.0) / p->tau_y;
    d.dk_s = p->lambda * guarded_exp(state.y - state.k_s) -
             p->delta * guarded_exp(k_invested - state.k_s);
    d.ds = (-state.s + std::tanh(p->beta1 * state.s + p->beta2 * state.h)) / p->tau_s;
    d.dk_d = p->c1 * d.ds + p->c2 * state.s;
    d.dh = (-state.h + std::tanh(p->gamma * d.dy * gate + state.xi)) / p->tau_h;
    return d;
}

ReducedDerivatives rhs_reduced(const ReducedState& state, const ValidatedParams& p, double xi) {
    require_finite(state.s, "s");
    require_finite(state.h, "h");
    require_finite(state.z, "z");
    require_finite(xi, "xi");

    const double omega_y = 1.0 / p->tau_y;
    const double growth = omega_y * (guarded_exp(state.z) - 1.0);  // dy in this regime

    ReducedDerivatives d;
    d.ds = (-state.s + std::tanh(p->beta1 * state.s + p->beta2 * state.h)) / p->tau_s;
    d.dh = (-state.h + std::tanh(p->gamma * growth + xi)) / p->tau_h;
    d.dz = p->rho * p->c1 * d.ds + p->rho * p->c2 * state.s - growth + p->epsilon;
    return d;
}

Matrix3 jacobian_reduced(const ReducedState& state, const ValidatedParams& p) {
    require_finite(state.s, "s");
    require_finite(state.h, "h");
    require_finite(state.z, "z");

    const double omega_y = 1.0 / p->tau_y;
    const double ez = guarded_exp(state.z);
    const double growth = omega_y * (ez - 1.0);

    const double ts = std::tanh(p->beta1 * state.s + p->beta2 * state.h);
    const double ts_sq = 1.0 - ts * ts;
    const double th = std::tanh(p->gamma * growth);
    const double th_sq = 1.0 - th * th;

    const double ds_ds = (-1.0 + p->beta1 * ts_sq) / p->tau_s;
    const double ds_dh = p->beta2 * ts_sq / p->tau_s;

    Matrix3 j{};
    // row 0: ds
    j[0][0] = ds_ds;
    j[0][1] = ds_dh;
    j[0][2] = 0.0;
    // row 1: dh (no direct s dependence)
    j[1][0] = 0.0;
    j[1][1] = -1.0 / p->tau_h;
    j[1][2] = p->gamma * omega_y * ez * th_sq / p->tau_h;
    // row 2: dz, chained through ds
    j[2][0] = p->rho * p->c1 * ds_ds + p->rho * p->c2;
    j[2][1] = p->rho * p->c1 * ds_dh;
    j[2][2] = -omega_y * ez;
    return j;
}

double analytic_supply_path(double t, const ValidatedParams& p, double B) {
    const double one_m_rho = 1.0 - p->rho;
    const double prefactor = std::pow(p->lambda / p->delta, p->rho / one_m_rho);
    const double inner = std::pow(B * std::exp(-one_m_rho * t / p->tau_y) + 1.0, 1.0 / one_m_rho);
    return prefactor * (inner + std::exp(p->epsilon * t / one_m_rho) - 1.0);
}

double supply_ode_rhs(double K, double Kdot, double t, const ValidatedParams& p) {
    if (!(K > 0.0)) throw NonPositiveCapital(K);
    require_finite(Kdot, "Kdot");
    require_finite(t, "t");
    const double forcing = p->lambda * std::pow(K, p->rho) * guarded_exp(p->epsilon * t);
    return (forcing - (1.0 + p->tau_y * p->delta) * Kdot - p->delta * K) / p->tau_y;
}

}  // namespace dynsolow
