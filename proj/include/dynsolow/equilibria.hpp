#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dynsolow/dynamics.hpp"
#include "dynsolow/params.hpp"

namespace dynsolow {

enum class PointKind { node, focus, saddle };
enum class Stability { stable, unstable, marginal };

std::string to_string(PointKind kind);
std::string to_string(Stability stability);

struct EquilibriumPoint {
    ReducedState state;
    std::array<std::complex<double>, 3> eigenvalues;  // per-day units
    PointKind kind;
    Stability stability;
};

struct LimitCycle {
    double period_days;
    double amplitude_s;  // max |s - mean(s)| on the cycle
};

struct BifurcationRecord {
    double gamma;
    double c2;
    std::vector<EquilibriumPoint> points;
    std::optional<LimitCycle> cycle;
    std::string error;  // per-record failure, empty on success
};

// 2D-terminology classification of a 3D fixed point: a node has three real
// eigenvalues of one sign, a saddle three real eigenvalues of mixed sign
// (always unstable), a focus one real plus a complex pair (stable only when
// every real part is negative). An eigenvalue counts as complex when
// |Im| > 1e-9 per day; any |Re| <= 1e-12 makes the stability marginal.
std::pair<PointKind, Stability> classify(const std::array<std::complex<double>, 3>& eigenvalues);

// All sentiment roots of arctanh(s) - beta1*s = beta2*tanh(gamma*(rho*c2*s +
// epsilon)) in (-1,1): dense sign-change bracketing on a 10^4-point grid,
// then bisection to |ds| < 1e-12. Sorted ascending.
std::vector<double> sentiment_equilibrium_roots(const ValidatedParams& p);

// Same bracketing applied to the equilibrium condition with argument
// gamma*c2*s + gamma*epsilon (no rho). Kept alongside the derived form; the
// CLI warns when the two root counts differ.
std::vector<double> sentiment_equilibrium_roots_paper_form(const ValidatedParams& p);

// Fixed points of the reduced system: reconstruct (h, z) from each sentiment
// root, refine jointly by damped Newton on the 3-D RHS to norm < 1e-12, attach
// eigenvalues of the reduced Jacobian and classify. Throws NewtonDivergence
// naming the offending root.
std::vector<EquilibriumPoint> equilibria(const ValidatedParams& p);

// Deterministic (xi = 0) cycle detector: integrate from probe, drop the first
// half as transient, collect upward zero-crossings of s (crossings of mean(s)
// when s never changes sign) and declare a cycle when >= 5 successive
// intervals have relative spread < 1%. Absence is a valid result.
std::optional<LimitCycle> detect_limit_cycle(const ValidatedParams& p, const ReducedState& probe,
                                             double t_end);

// Probes used by scans and the CLI when none are given.
std::vector<ReducedState> standard_probes();

// One record per (gamma, c2) pair, emitted in scan order regardless of the
// parallelism level; per-record errors are captured, not thrown.
std::vector<BifurcationRecord> bifurcation_scan(const ValidatedParams& base,
                                                const std::vector<double>& gamma_values,
                                                const std::vector<double>& c2_values,
                                                int parallel = 1,
                                                double probe_t_end = 250000.0);

}  // namespace dynsolow
