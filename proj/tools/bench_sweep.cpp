// Compares the serial reference runner against the OpenMP runner on the two
// workloads that fan out in practice: a seed ensemble of full simulations and
// a (gamma, c2) bifurcation scan. Wall time only; the outputs themselves are
// asserted identical in the test suite.

#include <chrono>
#include <cstdio>
#include <vector>

#include "dynsolow/analysis.hpp"
#include "dynsolow/equilibria.hpp"
#include "dynsolow/runner.hpp"
#include "dynsolow/stochastic.hpp"

using namespace dynsolow;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double bench_ensemble(const ValidatedParams& p, int n_runs, int parallel, double* checksum) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> slopes(n_runs);
    run_indexed(n_runs, parallel, [&](std::size_t i) {
        SimConfig cfg;
        cfg.t_end = 250.0 * 400.0;
        cfg.regime_mode = RegimeMode::general;
        cfg.seed = mix_seed(9000, i);
        const Trajectory traj = simulate(p, cfg);
        slopes[i] = growth_rate(traj.t, traj.y, cfg.t_end / 2.0, cfg.t_end).slope;
    });
    *checksum = 0.0;
    for (double s : slopes) *checksum += s;
    return seconds_since(t0);
}

double bench_scan(const ValidatedParams& p, int parallel, std::size_t* n_cycles) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> gammas{350.0, 700.0, 1000.0, 2000.0, 4000.0, 8000.0, 15000.0, 30000.0};
    const std::vector<double> c2s{2e-5, 1e-4};
    const auto records = bifurcation_scan(p, gammas, c2s, parallel, 250.0 * 600.0);
    *n_cycles = 0;
    for (const auto& rec : records)
        if (rec.cycle) ++*n_cycles;
    return seconds_since(t0);
}

}  // namespace

int main() {
    const ValidatedParams p = validate(ModelParams{});
    const int threads = hardware_parallelism();
    std::printf("workload                 serial      omp(%d)    speedup\n", threads);

    double sum_serial = 0.0, sum_parallel = 0.0;
    const double ens_serial = bench_ensemble(p, 16, 1, &sum_serial);
    const double ens_parallel = bench_ensemble(p, 16, threads, &sum_parallel);
    std::printf("ensemble 16x400y      %8.3fs   %8.3fs   %6.2fx%s\n", ens_serial, ens_parallel,
                ens_serial / ens_parallel, sum_serial == sum_parallel ? "" : "  MISMATCH");

    std::size_t cycles_serial = 0, cycles_parallel = 0;
    const double scan_serial = bench_scan(p, 1, &cycles_serial);
    const double scan_parallel = bench_scan(p, threads, &cycles_parallel);
    std::printf("scan 8x2 grid         %8.3fs   %8.3fs   %6.2fx%s\n", scan_serial, scan_parallel,
                scan_serial / scan_parallel, cycles_serial == cycles_parallel ? "" : "  MISMATCH");
    return 0;
}
