#include "dynsolow/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dynsolow/integrator.hpp"
#include "dynsolow/runner.hpp"

namespace dynsolow {

namespace {

constexpr double kComplexImagTol = 1e-9;   // per day
constexpr double kMarginalRealTol = 1e-12;
constexpr int kRootGridSize = 10000;
constexpr double kRootEdge = 1e-6;
constexpr double kNewtonTarget = 1e-13;
constexpr double kNewtonRequired = 1e-12;

double condition_residual(double s, const ValidatedParams& p, bool paper_form) {
    const double arg = paper_form ? p->gamma * (p->c2 * s + p->epsilon)
                                  : p->gamma * (p->rho * p->c2 * s + p->epsilon);
    return std::atanh(s) - p->beta1 * s - p->beta2 * std::tanh(arg);
}

std::vector<double> bracketed_roots(const ValidatedParams& p, bool paper_form) {
    const auto g = [&](double s) { return condition_residual(s, p, paper_form); };
    const double lo = -1.0 + kRootEdge;
    const double hi = 1.0 - kRootEdge;
    const double step = (hi - lo) / kRootGridSize;

    std::vector<double> roots;
    double s_prev = lo;
    double g_prev = g(lo);
    for (int i = 1; i <= kRootGridSize; ++i) {
        const double s_cur = lo + step * i;
        const double g_cur = g(s_cur);
        if (g_prev == 0.0) {
            roots.push_back(s_prev);
        } else if (g_prev * g_cur < 0.0) {
            double a = s_prev, b = s_cur;
            double ga = g_prev;
            while (b - a > 1e-12) {
                const double mid = 0.5 * (a + b);
                const double gm = g(mid);
                if (gm == 0.0) {
                    a = b = mid;
                    break;
                }
                if (ga * gm < 0.0) {
                    b = mid;
                } else {
                    a = mid;
                    ga = gm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        s_prev = s_cur;
        g_prev = g_cur;
    }
    if (g_prev == 0.0) roots.push_back(s_prev);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

std::string to_string(PointKind kind) {
    switch (kind) {
        case PointKind::node: return "node";
        case PointKind::focus: return "focus";
        case PointKind::saddle: return "saddle";
    }
    return "node";
}

std::string to_string(Stability stability) {
    switch (stability) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::marginal: return "marginal";
    }
    return "marginal";
}

std::pair<PointKind, Stability> classify(const std::array<std::complex<double>, 3>& eigenvalues) {
    int n_complex = 0;
    int n_pos = 0;
    int n_neg = 0;
    bool marginal = false;
    for (const auto& ev : eigenvalues) {
        if (std::fabs(ev.imag()) > kComplexImagTol) ++n_complex;
        if (std::fabs(ev.real()) <= kMarginalRealTol) {
            marginal = true;
        } else if (ev.real() > 0.0) {
            ++n_pos;
        } else {
            ++n_neg;
        }
    }

    PointKind kind;
    if (n_complex >= 2) {
        kind = PointKind::focus;
    } else if (n_pos > 0 && n_neg > 0) {
        kind = PointKind::saddle;
    } else {
        kind = PointKind::node;
    }

    Stability stability;
    if (kind == PointKind::saddle) {
        stability = Stability::unstable;  // mixed real signs, always unstable
    } else if (marginal) {
        stability = Stability::marginal;
    } else {
        stability = (n_pos == 0) ? Stability::stable : Stability::unstable;
    }
    return {kind, stability};
}

std::vector<double> sentiment_equilibrium_roots(const ValidatedParams& p) {
    return bracketed_roots(p, false);
}

std::vector<double> sentiment_equilibrium_roots_paper_form(const ValidatedParams& p) {
    return bracketed_roots(p, true);
}

std::vector<EquilibriumPoint> equilibria(const ValidatedParams& p) {
    const std::vector<double> roots = sentiment_equilibrium_roots(p);
    const double omega_y = 1.0 / p->tau_y;

    std::vector<EquilibriumPoint> points;
    points.reserve(roots.size());
    for (const double s_root : roots) {
        const double u = p->rho * p->c2 * s_root + p->epsilon;  // = omega_y*(e^z - 1) at the point
        if (1.0 + u / omega_y <= 0.0) {
            throw NewtonDivergence("no real z solves the equilibrium condition at s = " +
                                   format_double(s_root));
        }
        ReducedState x{s_root, std::tanh(p->gamma * u), std::log(1.0 + u / omega_y)};

        const auto residual_norm = [&](const ReducedState& st) {
            const ReducedDerivatives d = rhs_reduced(st, p, 0.0);
            return std::max({std::fabs(d.ds), std::fabs(d.dh), std::fabs(d.dz)});
        };

        double norm = residual_norm(x);
        for (int iter = 0; iter < 100 && norm >= kNewtonTarget; ++iter) {
            const ReducedDerivatives d = rhs_reduced(x, p, 0.0);
            const Matrix3 j = jacobian_reduced(x, p);
            Eigen::Matrix3d jm;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) jm(r, c) = j[r][c];
            const Eigen::Vector3d f(d.ds, d.dh, d.dz);
            const Eigen::Vector3d delta = jm.partialPivLu().solve(-f);

            double alpha = 1.0;
            ReducedState next = x;
            double next_norm = norm;
            while (alpha >= 1.0 / 1024.0) {
                const ReducedState trial{x.s + alpha * delta(0), x.h + alpha * delta(1),
                                         x.z + alpha * delta(2)};
                if (std::fabs(trial.s) < 1.0 && std::fabs(trial.h) < 1.0) {
                    const double trial_norm = residual_norm(trial);
                    if (trial_norm < norm) {
                        next = trial;
                        next_norm = trial_norm;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if (next_norm >= norm) break;  // stalled
            x = next;
            norm = next_norm;
        }
        if (!(norm < kNewtonRequired)) {
            throw NewtonDivergence("Newton refinement failed for sentiment root s = " +
                                   format_double(s_root) + ", residual " + format_double(norm));
        }

        EquilibriumPoint pt;
        pt.state = x;
        const Matrix3 j = jacobian_reduced(x, p);
        Eigen::Matrix3d jm;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) jm(r, c) = j[r][c];
        const Eigen::EigenSolver<Eigen::Matrix3d> solver(jm);
        for (int i = 0; i < 3; ++i) pt.eigenvalues[i] = solver.eigenvalues()(i);
        std::sort(pt.eigenvalues.begin(), pt.eigenvalues.end(),
                  [](const std::complex<double>& a, const std::complex<double>& b) {
                      if (a.real() != b.real()) return a.real() < b.real();
                      return a.imag() < b.imag();
                  });
        std::tie(pt.kind, pt.stability) = classify(pt.eigenvalues);
        points.push_back(pt);
    }
    return points;
}

std::optional<LimitCycle> detect_limit_cycle(const ValidatedParams& p, const ReducedState& probe,
                                             double t_end) {
    SimConfig cfg;
    cfg.t_end = t_end;
    cfg.dt = 1.0;
    cfg.record_stride = 5;
    cfg.regime_mode = RegimeMode::reduced_deterministic;
    cfg.initial.s0 = probe.s;
    cfg.initial.h0 = probe.h;
    cfg.initial.kd0 = 1.0;
    cfg.initial.y0 = p->rho - probe.z;

    const Trajectory traj = simulate_reduced(p, cfg, false);
    const std::size_t n = traj.size();
    const std::size_t start = n / 2;  // transient discarded
    if (n - start < 8) return std::nullopt;

    double mean = 0.0;
    double lo = traj.s[start];
    double hi = traj.s[start];
    for (std::size_t i = start; i < n; ++i) {
        mean += traj.s[i];
        lo = std::min(lo, traj.s[i]);
        hi = std::max(hi, traj.s[i]);
    }
    mean /= static_cast<double>(n - start);
    const double level = (lo < 0.0 && hi > 0.0) ? 0.0 : mean;

    std::vector<double> crossings;
    for (std::size_t i = start + 1; i < n; ++i) {
        const double a = traj.s[i - 1] - level;
        const double b = traj.s[i] - level;
        if (a < 0.0 && b >= 0.0) {
            const double frac = a / (a - b);
            crossings.push_back(traj.t[i - 1] + frac * (traj.t[i] - traj.t[i - 1]));
        }
    }
    if (crossings.size() < 6) return std::nullopt;

    std::vector<double> intervals(crossings.size() - 1);
    for (std::size_t i = 1; i < crossings.size(); ++i) intervals[i - 1] = crossings[i] - crossings[i - 1];
    const std::size_t m = 5;  // successive intervals required
    const auto last = std::vector<double>(intervals.end() - m, intervals.end());
    const double imean = std::accumulate(last.begin(), last.end(), 0.0) / m;
    const auto [imin, imax] = std::minmax_element(last.begin(), last.end());
    if ((*imax - *imin) / imean >= 0.01) return std::nullopt;

    // Degenerate-orbit guards: a decayed or decaying spiral around a stable
    // focus also produces evenly spaced crossings.
    double amp = 0.0;
    for (std::size_t i = start; i < n; ++i) amp = std::max(amp, std::fabs(traj.s[i] - mean));
    if (amp < 1e-3) return std::nullopt;
    const std::size_t quarter = (n - start) / 4;
    double amp_early = 0.0;
    double amp_late = 0.0;
    for (std::size_t i = start; i < start + quarter; ++i)
        amp_early = std::max(amp_early, std::fabs(traj.s[i] - mean));
    for (std::size_t i = n - quarter; i < n; ++i)
        amp_late = std::max(amp_late, std::fabs(traj.s[i] - mean));
    if (amp_late < 0.8 * amp_early) return std::nullopt;

    return LimitCycle{imean, amp};
}

std::vector<ReducedState> standard_probes() {
    return {
        {0.5, 0.5, 0.1},
        {-0.5, -0.5, -0.1},
        {0.6, -0.4, 0.05},
        {-0.6, 0.4, -0.05},
    };
}

std::vector<BifurcationRecord> bifurcation_scan(const ValidatedParams& base,
                                                const std::vector<double>& gamma_values,
                                                const std::vector<double>& c2_values,
                                                int parallel,
                                                double probe_t_end) {
    const std::size_t n = gamma_values.size() * c2_values.size();
    std::vector<BifurcationRecord> records(n);
    const std::vector<ReducedState> probes = standard_probes();

    run_indexed(n, parallel, [&](std::size_t idx) {
        const std::size_t gi = idx / c2_values.size();
        const std::size_t ci = idx % c2_values.size();
        BifurcationRecord& rec = records[idx];
        rec.gamma = gamma_values[gi];
        rec.c2 = c2_values[ci];
        try {
            ModelParams mp = *base;
            mp.gamma = rec.gamma;
            mp.c2 = rec.c2;
            const ValidatedParams vp = validate(mp);
            rec.points = equilibria(vp);
            for (const ReducedState& probe : probes) {
                rec.cycle = detect_limit_cycle(vp, probe, probe_t_end);
                if (rec.cycle) break;
            }
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    });
    return records;
}

}  // namespace dynsolow
