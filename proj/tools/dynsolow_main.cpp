#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dynsolow/analysis.hpp"
#include "dynsolow/equilibria.hpp"
#include "dynsolow/io.hpp"
#include "dynsolow/runner.hpp"
#include "dynsolow/scenarios.hpp"
#include "dynsolow/stochastic.hpp"
#include "dynsolow/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dynsolow;

// Exit codes: 0 ok, 1 failed checks / other, 2 config, 3 divergence, 4 io.
constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonFinite = 3;
constexpr int kExitIo = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

LoadedConfig load(const std::string& config_path) {
    LoadedConfig cfg = config_path.empty() ? load_config("") : load_config(read_file(config_path));
    for (const auto& warning : cfg.warnings) std::cerr << "warning: " << warning << "\n";
    return cfg;
}

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

// "name=v1,v2,..." or "name=lo:hi" (inclusive integer range).
GridAxis parse_grid_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw MalformedValue("--grid", spec);
    GridAxis axis;
    axis.name = spec.substr(0, eq);
    const std::string values = spec.substr(eq + 1);
    const auto colon = values.find(':');
    if (colon != std::string::npos && values.find(',') == std::string::npos) {
        const long lo = std::stol(values.substr(0, colon));
        const long hi = std::stol(values.substr(colon + 1));
        if (hi < lo) throw MalformedValue("--grid", spec);
        for (long v = lo; v <= hi; ++v) axis.values.push_back(static_cast<double>(v));
    } else {
        std::istringstream in(values);
        std::string tok;
        while (std::getline(in, tok, ',')) {
            if (tok.empty()) continue;
            std::size_t used = 0;
            axis.values.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw MalformedValue("--grid", spec);
        }
    }
    if (axis.values.empty()) throw MalformedValue("--grid", spec);
    return axis;
}

void apply_model_override(ModelParams& p, const std::string& name, double value) {
    if (name == "rho") p.rho = value;
    else if (name == "epsilon") p.epsilon = value;
    else if (name == "tau_y") p.tau_y = value;
    else if (name == "lambda") p.lambda = value;
    else if (name == "delta") p.delta = value;
    else if (name == "c1") p.c1 = value;
    else if (name == "c2") p.c2 = value;
    else if (name == "beta1") p.beta1 = value;
    else if (name == "beta2") p.beta2 = value;
    else if (name == "gamma") p.gamma = value;
    else if (name == "tau_s") p.tau_s = value;
    else if (name == "tau_h") p.tau_h = value;
    else if (name == "tau_xi") p.tau_xi = value;
    else if (name == "sigma_xi") p.sigma_xi = value;
    else if (name != "run") throw UnknownKey(name);  // "run" is a replicate index
}

std::string eigenvalue_string(const std::complex<double>& ev) {
    std::ostringstream out;
    out << format_double(ev.real());
    if (std::fabs(ev.imag()) > 0.0) {
        out << (ev.imag() >= 0.0 ? "+" : "-") << format_double(std::fabs(ev.imag())) << "i";
    }
    return out.str();
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const std::string& mode_flag, std::int64_t seed_flag, bool seed_given) {
    const auto t0 = std::chrono::steady_clock::now();
    LoadedConfig cfg = load(config_path);
    if (!mode_flag.empty()) {
        cfg.sim.regime_mode = regime_mode_from_string(mode_flag);
        cfg.overrides.push_back("regime_mode");
    }
    if (seed_given) {
        cfg.sim.seed = static_cast<std::uint64_t>(seed_flag);
        cfg.overrides.push_back("seed");
    }

    Trajectory traj;
    if (cfg.sim.regime_mode == RegimeMode::reduced_deterministic) {
        traj = simulate_reduced(cfg.params, cfg.sim, false);
    } else {
        traj = simulate(cfg.params, cfg.sim);
    }

    const fs::path dir(out_dir);
    atomic_write_file(dir / "trajectory.csv", trajectory_csv(traj));
    ManifestInfo info;
    info.overrides = cfg.overrides;
    info.output_files = {"trajectory.csv"};
    info.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    atomic_write_file(dir / "manifest.txt", manifest_text(traj.manifest, info));
    std::cout << "wrote " << (dir / "trajectory.csv").string() << " (" << traj.size()
              << " samples)\n";
    return kExitOk;
}

int cmd_equilibria(const std::string& config_path) {
    const LoadedConfig cfg = load(config_path);
    const auto derived_roots = sentiment_equilibrium_roots(cfg.params);
    const auto paper_roots = sentiment_equilibrium_roots_paper_form(cfg.params);
    if (derived_roots.size() != paper_roots.size()) {
        std::cerr << "warning: the printed equilibrium condition (gamma*c2*s + gamma*eps) yields "
                  << paper_roots.size() << " root(s), the reduced-system condition "
                  << "(gamma*(rho*c2*s + eps)) yields " << derived_roots.size()
                  << "; reporting the latter\n";
    }

    const auto points = equilibria(cfg.params);
    std::cout << "s,h,z,eig1,eig2,eig3,kind,stability\n";
    for (const auto& pt : points) {
        std::cout << format_double(pt.state.s) << ',' << format_double(pt.state.h) << ','
                  << format_double(pt.state.z) << ',' << eigenvalue_string(pt.eigenvalues[0]) << ','
                  << eigenvalue_string(pt.eigenvalues[1]) << ','
                  << eigenvalue_string(pt.eigenvalues[2]) << ',' << to_string(pt.kind) << ','
                  << to_string(pt.stability) << '\n';
    }
    return kExitOk;
}

int cmd_portrait(const std::string& config_path, const std::string& out_dir,
                 const std::vector<std::string>& grid_specs, double t_end) {
    const LoadedConfig cfg = load(config_path);

    std::vector<double> s_axis{-0.75, -0.25, 0.25, 0.75};
    std::vector<double> h_axis{-0.75, -0.25, 0.25, 0.75};
    std::vector<double> z_axis{0.0};
    for (const auto& spec : grid_specs) {
        const GridAxis axis = parse_grid_axis(spec);
        if (axis.name == "s") s_axis = axis.values;
        else if (axis.name == "h") h_axis = axis.values;
        else if (axis.name == "z") z_axis = axis.values;
        else throw UnknownKey(axis.name);
    }

    std::vector<ReducedState> grid;
    for (double s : s_axis)
        for (double h : h_axis)
            for (double z : z_axis) grid.push_back(ReducedState{s, h, z});

    const auto results = phase_portrait(cfg.params, grid, t_end);

    const fs::path dir(out_dir);
    std::ostringstream summary;
    summary << "index,start_s,start_h,start_z,label,attractor_index\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "portrait_%03zu.csv", i);
        atomic_write_file(dir / name, trajectory_csv(results[i].traj));
        summary << i << ',' << format_double(results[i].start.s) << ','
                << format_double(results[i].start.h) << ',' << format_double(results[i].start.z)
                << ',' << results[i].label << ',' << results[i].attractor_index << '\n';
    }
    atomic_write_file(dir / "summary.csv", summary.str());

    std::ostringstream manifest;
    manifest << "# dynsolow phase portrait (xi = 0)\n# version = " << kVersion
             << "\n# t_end = " << format_double(t_end) << "\n"
             << serialize_config(*cfg.params, cfg.sim);
    atomic_write_file(dir / "manifest.txt", manifest.str());
    std::cout << "wrote " << results.size() << " portrait trajectories to " << out_dir << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& grid_specs, const std::string& kind, int parallel,
              const std::string& mode_flag, std::int64_t seed_flag, bool seed_given) {
    LoadedConfig cfg = load(config_path);
    if (!mode_flag.empty()) cfg.sim.regime_mode = regime_mode_from_string(mode_flag);
    if (seed_given) cfg.sim.seed = static_cast<std::uint64_t>(seed_flag);

    std::vector<GridAxis> axes;
    for (const auto& spec : grid_specs) axes.push_back(parse_grid_axis(spec));
    std::size_t n_points = axes.empty() ? 0 : 1;
    for (const auto& axis : axes) n_points *= axis.values.size();

    const fs::path dir(out_dir);
    fs::create_directories(dir);

    std::ostringstream manifest;
    manifest << "# dynsolow sweep\n# version = " << kVersion << "\n# kind = " << kind
             << "\n# master_seed = " << cfg.sim.seed << "\n# parallel = " << parallel << "\n";
    for (const auto& axis : axes) {
        manifest << "# grid " << axis.name << " =";
        for (double v : axis.values) manifest << ' ' << format_double(v);
        manifest << "\n";
    }
    manifest << serialize_config(*cfg.params, cfg.sim);
    atomic_write_file(dir / "sweep_manifest.txt", manifest.str());

    if (n_points == 0) {
        std::cout << "empty grid, nothing to do\n";
        return kExitOk;
    }

    // Grid point -> parameter overrides, gamma-major in flag order.
    const auto point_values = [&](std::size_t idx) {
        std::vector<std::pair<std::string, double>> values;
        std::size_t rest = idx;
        for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
            const std::size_t m = it->values.size();
            values.emplace_back(it->name, it->values[rest % m]);
            rest /= m;
        }
        std::reverse(values.begin(), values.end());
        return values;
    };

    if (kind == "scan") {
        std::vector<double> gammas{cfg.params->gamma};
        std::vector<double> c2s{cfg.params->c2};
        for (const auto& axis : axes) {
            if (axis.name == "gamma") gammas = axis.values;
            else if (axis.name == "c2") c2s = axis.values;
            else throw UnknownKey(axis.name + " (scan kind sweeps gamma and/or c2)");
        }
        const auto records = bifurcation_scan(cfg.params, gammas, c2s, parallel);
        std::ostringstream out;
        out << "gamma,c2,n_equilibria,kinds,stabilities,cycle_period_days,cycle_amplitude,error\n";
        for (const auto& rec : records) {
            out << format_double(rec.gamma) << ',' << format_double(rec.c2) << ','
                << rec.points.size() << ',';
            for (std::size_t i = 0; i < rec.points.size(); ++i)
                out << (i ? ";" : "") << to_string(rec.points[i].kind);
            out << ',';
            for (std::size_t i = 0; i < rec.points.size(); ++i)
                out << (i ? ";" : "") << to_string(rec.points[i].stability);
            out << ',';
            if (rec.cycle)
                out << format_double(rec.cycle->period_days) << ','
                    << format_double(rec.cycle->amplitude_s);
            else
                out << ',';
            out << ',' << rec.error << '\n';
        }
        atomic_write_file(dir / "scan.csv", out.str());
        std::cout << "wrote " << records.size() << " scan records to "
                  << (dir / "scan.csv").string() << "\n";
        return kExitOk;
    }

    if (kind != "ensemble") throw MalformedValue("--kind", kind);

    struct Row {
        double y = NAN, ks = NAN, kd = NAN, sbar = NAN, fraction = NAN;
    };
    std::vector<std::string> value_cols(n_points);
    std::vector<std::uint64_t> seeds(n_points);
    std::vector<Row> rows(n_points);
    std::vector<std::string> errors(n_points);

    run_indexed(n_points, parallel, [&](std::size_t idx) {
        try {
            ModelParams mp = *cfg.params;
            const auto values = point_values(idx);
            std::ostringstream vals;
            for (std::size_t i = 0; i < values.size(); ++i) {
                apply_model_override(mp, values[i].first, values[i].second);
                vals << (i ? ";" : "") << values[i].first << '=' << format_double(values[i].second);
            }
            value_cols[idx] = vals.str();

            SimConfig sim = cfg.sim;
            sim.seed = mix_seed(cfg.sim.seed, idx);
            seeds[idx] = sim.seed;
            const ValidatedParams vp = validate(mp);
            const Trajectory traj = simulate(vp, sim);

            const double t_end = traj.t.back();
            Row row;
            row.y = growth_rate(traj.t, traj.y, t_end / 2.0, t_end).slope;
            row.ks = growth_rate(traj.t, traj.k_s, t_end / 2.0, t_end).slope;
            row.kd = growth_rate(traj.t, traj.k_d, t_end / 2.0, t_end).slope;
            row.sbar = mean_sentiment(traj);
            if (sim.regime_mode == RegimeMode::general) row.fraction = regime_fraction(traj);
            rows[idx] = row;

            char name[64];
            std::snprintf(name, sizeof(name), "point_%04zu", idx);
            const fs::path point_dir = dir / name;
            atomic_write_file(point_dir / "trajectory.csv", trajectory_csv(traj));
            ManifestInfo info;
            info.overrides = cfg.overrides;
            info.output_files = {"trajectory.csv"};
            atomic_write_file(point_dir / "manifest.txt", manifest_text(traj.manifest, info));
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    });

    std::ostringstream out;
    out << "index,values,seed,y_slope,ks_slope,kd_slope,mean_s,regime_fraction,error\n";
    for (std::size_t i = 0; i < n_points; ++i) {
        out << i << ',' << value_cols[i] << ',' << seeds[i] << ',' << format_double(rows[i].y)
            << ',' << format_double(rows[i].ks) << ',' << format_double(rows[i].kd) << ','
            << format_double(rows[i].sbar) << ',' << format_double(rows[i].fraction) << ','
            << errors[i] << '\n';
    }
    atomic_write_file(dir / "summary.csv", out.str());
    std::cout << "wrote " << n_points << " grid points to " << out_dir << "\n";
    return kExitOk;
}

int cmd_analyze(const std::string& traj_path, std::string manifest_path,
                const std::string& out_dir) {
    if (manifest_path.empty()) {
        manifest_path = (fs::path(traj_path).parent_path() / "manifest.txt").string();
    }
    const LoadedConfig cfg = load(manifest_path);
    Trajectory traj = read_trajectory_csv_file(traj_path);
    traj.manifest.params = *cfg.params;
    traj.manifest.sim = cfg.sim;
    traj.manifest.version = kVersion;

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const double R = derived_quantities(cfg.params).R;
    const double t_end = traj.t.back();

    std::ostringstream rep;
    rep << "mode: " << to_string(cfg.sim.regime_mode) << "\n";
    rep << "samples: " << traj.size() << "\n";
    rep << "solow_rate_R: " << format_double(R) << "\n";
    rep << "window_days: [" << format_double(t_end / 2.0) << ", " << format_double(t_end) << "]\n";
    if (!traj.reduced) {
        rep << "y_slope_per_day: "
            << format_double(growth_rate(traj.t, traj.y, t_end / 2.0, t_end).slope) << "\n";
        rep << "ks_slope_per_day: "
            << format_double(growth_rate(traj.t, traj.k_s, t_end / 2.0, t_end).slope) << "\n";
        rep << "kd_slope_per_day: "
            << format_double(growth_rate(traj.t, traj.k_d, t_end / 2.0, t_end).slope) << "\n";
    }
    rep << "mean_sentiment: " << format_double(mean_sentiment(traj)) << "\n";
    if (!traj.reduced && cfg.sim.regime_mode == RegimeMode::general) {
        rep << "regime_fraction: " << format_double(regime_fraction(traj)) << "\n";
    }

    // Cycle histograms where crossings exist.
    const auto try_histogram = [&](std::span<const double> series, const std::string& file,
                                   const char* label) {
        try {
            const auto durations = cycle_durations(traj.t, series);
            const DurationHistogram hist = duration_histogram(durations);
            std::ostringstream out;
            out << "bin_start_years,bin_end_years,count\n";
            for (std::size_t i = 0; i < hist.counts.size(); ++i) {
                out << format_double(hist.bin_edges_years[i]) << ','
                    << format_double(hist.bin_edges_years[i + 1]) << ',' << hist.counts[i] << '\n';
            }
            atomic_write_file(dir / file, out.str());
            rep << label << "_cycles: " << hist.total_cycles << "\n";
            rep << label << "_modal_bin_start_years: " << format_double(hist.modal_bin_start_years)
                << "\n";
            rep << label << "_fraction_40_70: " << format_double(hist.fraction_40_70) << "\n";
        } catch (const InsufficientCrossings&) {
            rep << label << "_cycles: 0\n";
        }
    };
    if (!traj.reduced) {
        const std::vector<double> residual = detrend(traj.t, traj.y);
        try_histogram(residual, "histogram_production.csv", "production");
    }
    try_histogram(traj.s, "histogram_sentiment.csv", "sentiment");

    atomic_write_file(dir / "report.txt", rep.str());
    std::cout << rep.str();
    return kExitOk;
}

int cmd_reproduce(const std::string& scenario, const std::string& out_dir, int parallel) {
    if (!is_scenario(scenario)) {
        std::cerr << "unknown scenario: " << scenario << "\nvalid scenarios:\n";
        for (const auto& name : scenario_names()) std::cerr << "  " << name << "\n";
        return kExitConfig;
    }
    const ScenarioResult result = run_scenario(scenario, out_dir, parallel);
    std::cout << format_scenario_result(result);
    return result.passed() ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamic Solow business-cycle simulator"};
    app.set_version_flag("--version", dynsolow::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string mode_flag;
    std::int64_t seed_flag = 0;
    int parallel = 1;
    std::vector<std::string> grid_specs;

    auto* sim = app.add_subcommand("simulate", "integrate one trajectory and write CSV + manifest");
    sim->add_option("--config", config_path, "config file (key = value lines)");
    sim->add_option("--out", out_dir, "output directory");
    auto* sim_seed = sim->add_option("--seed", seed_flag, "override the config seed");
    sim->add_option("--mode", mode_flag,
                    "override regime_mode: general|forced_supply|forced_demand|reduced");

    auto* eq = app.add_subcommand("equilibria", "locate and classify reduced-system fixed points");
    eq->add_option("--config", config_path, "config file");

    double portrait_tend = 250.0 * 400.0;
    auto* por = app.add_subcommand("portrait", "deterministic phase portraits (xi = 0)");
    por->add_option("--config", config_path, "config file");
    por->add_option("--out", out_dir, "output directory");
    por->add_option("--grid", grid_specs, "initial-state axis, e.g. s=-0.5,0.5 (repeatable)");
    por->add_option("--tend", portrait_tend, "integration horizon in days");

    std::string sweep_kind = "scan";
    auto* swp = app.add_subcommand("sweep", "run a parameter/seed grid concurrently");
    swp->add_option("--config", config_path, "config file");
    swp->add_option("--out", out_dir, "output directory");
    swp->add_option("--grid", grid_specs, "grid axis name=v1,v2,... or name=lo:hi (repeatable)");
    swp->add_option("--kind", sweep_kind, "scan (equilibria+cycles) or ensemble (simulations)");
    swp->add_option("--parallel", parallel, "worker bound (default 1)");
    auto* swp_seed = swp->add_option("--seed", seed_flag, "master seed override");
    swp->add_option("--mode", mode_flag, "regime_mode override");

    std::string traj_path;
    std::string manifest_path;
    auto* ana = app.add_subcommand("analyze", "growth/cycle statistics of a stored trajectory");
    ana->add_option("--traj", traj_path, "trajectory CSV")->required();
    ana->add_option("--manifest", manifest_path, "companion manifest (default: sibling manifest.txt)");
    ana->add_option("--out", out_dir, "output directory");

    std::string scenario;
    auto* rep = app.add_subcommand("reproduce", "run a documented desk-scale scenario");
    rep->add_option("scenario", scenario, "scenario name")->required();
    rep->add_option("--out", out_dir, "output directory");
    rep->add_option("--parallel", parallel, "worker bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, out_dir, mode_flag, seed_flag, !sim_seed->empty());
        if (eq->parsed()) return cmd_equilibria(config_path);
        if (por->parsed()) return cmd_portrait(config_path, out_dir, grid_specs, portrait_tend);
        if (swp->parsed())
            return cmd_sweep(config_path, out_dir, grid_specs, sweep_kind, parallel, mode_flag,
                             seed_flag, !swp_seed->empty());
        if (ana->parsed()) return cmd_analyze(traj_path, manifest_path, out_dir);
        if (rep->parsed()) return cmd_reproduce(scenario, out_dir, parallel);
    } catch (const dynsolow::NonFiniteState& e) {
        std::cerr << "error (diverged): " << e.what() << "\n";
        return kExitNonFinite;
    } catch (const dynsolow::IoError& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return kExitIo;
    } catch (const dynsolow::ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitOk;
}
