#include "dynsolow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace dynsolow {

namespace {

constexpr std::size_t kMinSamples = 100;

struct LineFit {
    double slope;
    double intercept;
    double residual_rms;
};

LineFit ols_line(std::span<const double> t, std::span<const double> v) {
    const std::size_t n = t.size();
    double t_mean = 0.0;
    double v_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        t_mean += t[i];
        v_mean += v[i];
    }
    t_mean /= static_cast<double>(n);
    v_mean /= static_cast<double>(n);

    double stt = 0.0;
    double stv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = t[i] - t_mean;
        stt += dt * dt;
        stv += dt * (v[i] - v_mean);
    }
    LineFit fit;
    fit.slope = stv / stt;
    fit.intercept = v_mean - fit.slope * t_mean;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = v[i] - (fit.intercept + fit.slope * t[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

}  // namespace

GrowthEstimate growth_rate(std::span<const double> t, std::span<const double> v,
                           double t_a, double t_b, const std::string& variable) {
    std::size_t lo = 0;
    while (lo < t.size() && t[lo] < t_a) ++lo;
    std::size_t hi = lo;
    while (hi < t.size() && t[hi] <= t_b) ++hi;
    if (hi - lo < kMinSamples) {
        throw WindowTooSmall("growth window [" + format_double(t_a) + ", " + format_double(t_b) +
                             "] holds " + std::to_string(hi - lo) + " samples, need >= 100");
    }
    const LineFit fit = ols_line(t.subspan(lo, hi - lo), v.subspan(lo, hi - lo));
    GrowthEstimate est;
    est.variable = variable;
    est.slope = fit.slope;
    est.intercept = fit.intercept;
    est.window_start = t_a;
    est.window_end = t_b;
    est.residual_rms = fit.residual_rms;
    return est;
}

std::vector<double> detrend(std::span<const double> t, std::span<const double> v) {
    if (t.size() < kMinSamples) {
        throw WindowTooSmall("detrend needs >= 100 samples, got " + std::to_string(t.size()));
    }
    const LineFit fit = ols_line(t, v);
    std::vector<double> residuals(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        residuals[i] = v[i] - (fit.intercept + fit.slope * t[i]);
    }
    return residuals;
}

std::vector<double> cycle_durations(std::span<const double> t, std::span<const double> v) {
    std::vector<double> crossings;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i - 1] < 0.0 && v[i] >= 0.0) {
            const double frac = v[i - 1] / (v[i - 1] - v[i]);
            crossings.push_back(t[i - 1] + frac * (t[i] - t[i - 1]));
        }
    }
    if (crossings.size() < 2) {
        throw InsufficientCrossings("need >= 2 upward zero crossings, found " +
                                    std::to_string(crossings.size()));
    }
    std::vector<double> durations(crossings.size() - 1);
    for (std::size_t i = 1; i < crossings.size(); ++i) {
        durations[i - 1] = crossings[i] - crossings[i - 1];
    }
    return durations;
}

DurationHistogram duration_histogram(const std::vector<double>& durations_days) {
    constexpr double kLoYears = 10.0;
    constexpr double kHiYears = 150.0;
    constexpr double kBinYears = 5.0;
    const int n_bins = static_cast<int>((kHiYears - kLoYears) / kBinYears);

    DurationHistogram hist;
    hist.bin_edges_years.resize(n_bins + 1);
    for (int i = 0; i <= n_bins; ++i) hist.bin_edges_years[i] = kLoYears + kBinYears * i;
    hist.counts.assign(n_bins, 0);
    hist.total_cycles = static_cast<int>(durations_days.size());

    int binned = 0;
    int in_range = 0;
    for (const double d : durations_days) {
        const double years = d / kDaysPerYear;
        if (years < kLoYears || years >= kHiYears) continue;
        const int bin = static_cast<int>((years - kLoYears) / kBinYears);
        ++hist.counts[bin];
        ++binned;
        if (years >= 40.0 && years < 70.0) ++in_range;
    }
    if (binned > 0) {
        const auto modal = std::max_element(hist.counts.begin(), hist.counts.end());
        hist.modal_bin = static_cast<int>(modal - hist.counts.begin());
        hist.modal_bin_start_years = hist.bin_edges_years[hist.modal_bin];
        hist.fraction_40_70 = static_cast<double>(in_range) / static_cast<double>(binned);
    }
    return hist;
}

double regime_fraction(const Trajectory& traj) {
    if (traj.manifest.sim.regime_mode != RegimeMode::general) {
        throw WrongMode("regime_fraction applies to general-mode trajectories, got " +
                        to_string(traj.manifest.sim.regime_mode));
    }
    if (traj.size() == 0) throw WindowTooSmall("empty trajectory");
    std::size_t demand = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.k_d[i] <= traj.k_s[i]) ++demand;
    }
    return static_cast<double>(demand) / static_cast<double>(traj.size());
}

double mean_sentiment(const Trajectory& traj, double burn_in) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.t[i] < burn_in) continue;
        sum += traj.s[i];
        ++n;
    }
    if (n < kMinSamples) {
        throw WindowTooSmall("mean_sentiment has " + std::to_string(n) +
                             " post-burn-in samples, need >= 100");
    }
    return sum / static_cast<double>(n);
}

std::vector<double> fourier_lowpass(std::span<const double> t, std::span<const double> v,
                                    double cutoff_period) {
    const std::size_t n = v.size();
    if (n < 2) return std::vector<double>(v.begin(), v.end());
    const double dt = t[1] - t[0];
    for (std::size_t i = 1; i < n; ++i) {
        if (std::fabs((t[i] - t[i - 1]) - dt) > 1e-9 * std::max(1.0, std::fabs(dt))) {
            throw NonUniformSampling("sample spacing varies at index " + std::to_string(i));
        }
    }

    // Mirror-pad to twice the length so the periodic extension is continuous
    // at both ends.
    const std::size_t m = 2 * n;
    std::vector<double> padded(m);
    for (std::size_t i = 0; i < n; ++i) padded[i] = v[i];
    for (std::size_t i = 0; i < n; ++i) padded[n + i] = v[n - 1 - i];

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, padded);
    for (std::size_t k = 1; k < m; ++k) {
        const std::size_t k_eff = std::min(k, m - k);  // conjugate-symmetric index
        const double period = static_cast<double>(m) * dt / static_cast<double>(k_eff);
        if (period < cutoff_period) spectrum[k] = 0.0;
    }
    std::vector<double> filtered;
    fft.inv(filtered, spectrum);
    filtered.resize(n);
    return filtered;
}

AsymptoticReport asymptotic_report(const ValidatedParams& p, RegimeMode mode,
                                   double horizon_years, std::uint64_t seed) {
    SimConfig cfg;
    cfg.t_end = horizon_years * kDaysPerYear;
    cfg.regime_mode = mode;
    cfg.seed = seed;

    const Trajectory traj = simulate(p, cfg);
    const double half = cfg.t_end / 2.0;

    AsymptoticReport report;
    report.mode = mode;
    report.horizon_years = horizon_years;
    report.seed = seed;
    report.y_fit = growth_rate(traj.t, traj.y, half, cfg.t_end, "y");
    report.ks_fit = growth_rate(traj.t, traj.k_s, half, cfg.t_end, "k_s");
    report.kd_fit = growth_rate(traj.t, traj.k_d, half, cfg.t_end, "k_d");
    report.R = derived_quantities(p).R;
    report.mean_s = mean_sentiment(traj, half);

    const double y0 = report.y_fit.slope;
    const double kd0 = report.kd_fit.slope;
    if (mode == RegimeMode::forced_demand) {
        report.relation_residual = std::fabs(y0 - (report.R + p->rho * (kd0 - report.R)));
    } else {
        report.relation_residual = std::fabs(y0 - report.R);
    }
    report.supply_demand_gap = std::fabs(y0 - report.ks_fit.slope);
    return report;
}

std::string format_report(const AsymptoticReport& report) {
    std::ostringstream out;
    out << "mode: " << to_string(report.mode) << "\n";
    out << "horizon_years: " << format_double(report.horizon_years) << "\n";
    out << "seed: " << report.seed << "\n";
    out << "window_days: [" << format_double(report.y_fit.window_start) << ", "
        << format_double(report.y_fit.window_end) << "]\n";
    out << "y_slope_per_day: " << format_double(report.y_fit.slope) << "\n";
    out << "ks_slope_per_day: " << format_double(report.ks_fit.slope) << "\n";
    out << "kd_slope_per_day: " << format_double(report.kd_fit.slope) << "\n";
    out << "solow_rate_R: " << format_double(report.R) << "\n";
    out << "mean_sentiment: " << format_double(report.mean_s) << "\n";
    out << "relation_residual: " << format_double(report.relation_residual) << "\n";
    out << "supply_demand_gap: " << format_double(report.supply_demand_gap) << "\n";
    return out.str();
}

}  // namespace dynsolow
