#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dynsolow/integrator.hpp"
#include "dynsolow/params.hpp"

namespace dynsolow {

inline constexpr double kDaysPerYear = 250.0;

struct GrowthEstimate {
    std::string variable;
    double slope = 0.0;      // per day
    double intercept = 0.0;
    double window_start = 0.0;  // days
    double window_end = 0.0;    // days
    double residual_rms = 0.0;
};

// Ordinary least-squares line fit over [t_a, t_b]; needs >= 100 samples in
// the window.
GrowthEstimate growth_rate(std::span<const double> t, std::span<const double> v,
                           double t_a, double t_b, const std::string& variable = "");

// Residuals after subtracting the full-sample OLS line. Idempotent.
std::vector<double> detrend(std::span<const double> t, std::span<const double> v);

// Durations between consecutive upward (negative -> nonnegative) zero
// crossings, with linearly interpolated crossing times. Days.
std::vector<double> cycle_durations(std::span<const double> t, std::span<const double> v);

struct DurationHistogram {
    std::vector<double> bin_edges_years;  // 10, 15, ..., 150
    std::vector<int> counts;
    int total_cycles = 0;    // including durations outside [10, 150] years
    int modal_bin = -1;      // index into counts, -1 when empty
    double modal_bin_start_years = 0.0;
    double fraction_40_70 = 0.0;  // over binned durations
};

// 5-year bins over [10, 150) years; out-of-range durations count toward
// total_cycles only.
DurationHistogram duration_histogram(const std::vector<double>& durations_days);

// Time fraction of samples with k_d <= k_s. Throws WrongMode unless the
// trajectory was produced in general mode.
double regime_fraction(const Trajectory& traj);

// Arithmetic time average of sentiment over samples with t >= burn_in.
double mean_sentiment(const Trajectory& traj, double burn_in = 0.0);

// DFT low-pass: zero every component with period < cutoff_period. The series
// is mirror-padded to twice its length before the transform and the padding
// stripped after; uniform sampling required.
std::vector<double> fourier_lowpass(std::span<const double> t, std::span<const double> v,
                                    double cutoff_period);

struct AsymptoticReport {
    RegimeMode mode;
    double horizon_years = 0.0;
    std::uint64_t seed = 0;
    GrowthEstimate y_fit, ks_fit, kd_fit;
    double R = 0.0;
    double mean_s = 0.0;
    double relation_residual = 0.0;  // applicable long-run relation, per day
    double supply_demand_gap = 0.0;  // |y0 - ks0|, per day
};

// Runs simulate in the given mode, fits growth rates for y, k_s, k_d over the
// last half of the horizon and reports the residual of the applicable
// long-run relation: demand-driven y0 = R + rho*(kd0 - R), otherwise y0 = R.
AsymptoticReport asymptotic_report(const ValidatedParams& p, RegimeMode mode,
                                   double horizon_years, std::uint64_t seed);

std::string format_report(const AsymptoticReport& report);

}  // namespace dynsolow
