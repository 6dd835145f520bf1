#include "dynsolow/params.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace dynsolow {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string to_string(RegimeMode mode) {
    switch (mode) {
        case RegimeMode::general: return "general";
        case RegimeMode::forced_supply: return "forced_supply";
        case RegimeMode::forced_demand: return "forced_demand";
        case RegimeMode::reduced_deterministic: return "reduced_deterministic";
    }
    return "general";
}

RegimeMode regime_mode_from_string(const std::string& name) {
    if (name == "general") return RegimeMode::general;
    if (name == "forced_supply") return RegimeMode::forced_supply;
    if (name == "forced_demand") return RegimeMode::forced_demand;
    if (name == "reduced_deterministic" || name == "reduced") return RegimeMode::reduced_deterministic;
    throw MalformedValue("regime_mode", name);
}

ValidatedParams validate(const ModelParams& raw, std::vector<std::string>* warnings) {
    const struct {
        const char* name;
        double value;
    } timescales[] = {
        {"tau_y", raw.tau_y},
        {"tau_s", raw.tau_s},
        {"tau_h", raw.tau_h},
        {"tau_xi", raw.tau_xi},
    };
    for (const auto& ts : timescales) {
        if (!(ts.value > 0.0)) throw NonPositiveTimescale(ts.name, ts.value);
    }
    if (!(raw.rho > 0.0 && raw.rho < 1.0)) throw ShareOutOfRange("rho", raw.rho);
    if (!(raw.lambda > 0.0 && raw.lambda < 1.0)) throw ShareOutOfRange("lambda", raw.lambda);
    if (!(raw.delta > 0.0)) throw NegativeRate("delta", raw.delta);
    if (!(raw.epsilon >= 0.0)) throw NegativeRate("epsilon", raw.epsilon);
    if (!(raw.sigma_xi >= 0.0)) throw NegativeRate("sigma_xi", raw.sigma_xi);

    if (warnings) {
        const double tech = raw.epsilon > 0.0 ? 1.0 / raw.epsilon : std::numeric_limits<double>::infinity();
        if (!(raw.tau_xi < raw.tau_h && raw.tau_h < raw.tau_s && raw.tau_s < raw.tau_y && raw.tau_y < tech)) {
            std::ostringstream msg;
            msg << "timescale ordering tau_xi < tau_h < tau_s < tau_y < 1/epsilon violated: "
                << raw.tau_xi << ", " << raw.tau_h << ", " << raw.tau_s << ", " << raw.tau_y << ", " << tech;
            warnings->push_back(msg.str());
        }
    }
    return ValidatedParams(raw);
}

DerivedQuantities derived_quantities(const ValidatedParams& p) {
    DerivedQuantities d;
    d.R = p->epsilon / (1.0 - p->rho);
    d.omega_y = 1.0 / p->tau_y;
    d.tech_timescale = p->epsilon > 0.0 ? 1.0 / p->epsilon : std::numeric_limits<double>::infinity();
    return d;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || std::isnan(v)) throw MalformedValue(key, value);
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0') throw MalformedValue(key, value);
    return v;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    if (!value.empty() && value[0] == '-') {
        const long long v = std::strtoll(begin, &end, 10);
        if (end == begin || *end != '\0') throw MalformedValue(key, value);
        return static_cast<std::uint64_t>(v);
    }
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0') throw MalformedValue(key, value);
    return v;
}

}  // namespace

LoadedConfig load_config(const std::string& text) {
    ModelParams p;
    SimConfig sim;
    std::vector<std::string> overrides;
    bool y0_set = false;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw MalformedValue("line " + std::to_string(lineno), line);
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw MalformedValue(key.empty() ? "line " + std::to_string(lineno) : key, value);

        if (key == "rho") p.rho = parse_double(key, value);
        else if (key == "epsilon") p.epsilon = parse_double(key, value);
        else if (key == "tau_y") p.tau_y = parse_double(key, value);
        else if (key == "lambda") p.lambda = parse_double(key, value);
        else if (key == "delta") p.delta = parse_double(key, value);
        else if (key == "c1") p.c1 = parse_double(key, value);
        else if (key == "c2") p.c2 = parse_double(key, value);
        else if (key == "beta1") p.beta1 = parse_double(key, value);
        else if (key == "beta2") p.beta2 = parse_double(key, value);
        else if (key == "gamma") p.gamma = parse_double(key, value);
        else if (key == "tau_s") p.tau_s = parse_double(key, value);
        else if (key == "tau_h") p.tau_h = parse_double(key, value);
        else if (key == "tau_xi") p.tau_xi = parse_double(key, value);
        else if (key == "sigma_xi") p.sigma_xi = parse_double(key, value);
        else if (key == "t_end") sim.t_end = parse_double(key, value);
        else if (key == "dt") sim.dt = parse_double(key, value);
        else if (key == "record_stride") sim.record_stride = static_cast<int>(parse_int(key, value));
        else if (key == "regime_mode") sim.regime_mode = regime_mode_from_string(value);
        else if (key == "seed") sim.seed = parse_seed(key, value);
        else if (key == "burn_in") sim.burn_in = parse_double(key, value);
        else if (key == "initial_y0") { sim.initial.y0 = parse_double(key, value); y0_set = true; }
        else if (key == "initial_ks0") sim.initial.ks0 = parse_double(key, value);
        else if (key == "initial_kd0") sim.initial.kd0 = parse_double(key, value);
        else if (key == "initial_s0") sim.initial.s0 = parse_double(key, value);
        else if (key == "initial_h0") sim.initial.h0 = parse_double(key, value);
        else if (key == "initial_xi0") sim.initial.xi0 = parse_double(key, value);
        else throw UnknownKey(key);
        overrides.push_back(key);
    }

    // Default initial log output keeps z = rho*k_d + eps*t - y at zero for t=0.
    if (!y0_set) sim.initial.y0 = p.rho * sim.initial.kd0;

    if (!(sim.dt > 0.0)) throw MalformedValue("dt", format_double(sim.dt));
    if (!(sim.t_end >= sim.dt)) throw MalformedValue("t_end", format_double(sim.t_end));
    if (sim.record_stride < 1) throw MalformedValue("record_stride", std::to_string(sim.record_stride));
    if (!(sim.burn_in >= 0.0 && sim.burn_in < sim.t_end)) throw MalformedValue("burn_in", format_double(sim.burn_in));
    if (!(sim.initial.s0 > -1.0 && sim.initial.s0 < 1.0)) throw MalformedValue("initial_s0", format_double(sim.initial.s0));
    if (!(sim.initial.h0 > -1.0 && sim.initial.h0 < 1.0)) throw MalformedValue("initial_h0", format_double(sim.initial.h0));

    std::vector<std::string> warnings;
    ValidatedParams vp = validate(p, &warnings);
    return LoadedConfig{vp, sim, std::move(warnings), std::move(overrides)};
}

std::string serialize_config(const ModelParams& p, const SimConfig& sim) {
    std::ostringstream out;
    const auto put = [&out](const char* key, double v) { out << key << " = " << format_double(v) << "\n"; };
    put("rho", p.rho);
    put("epsilon", p.epsilon);
    put("tau_y", p.tau_y);
    put("lambda", p.lambda);
    put("delta", p.delta);
    put("c1", p.c1);
    put("c2", p.c2);
    put("beta1", p.beta1);
    put("beta2", p.beta2);
    put("gamma", p.gamma);
    put("tau_s", p.tau_s);
    put("tau_h", p.tau_h);
    put("tau_xi", p.tau_xi);
    put("sigma_xi", p.sigma_xi);
    put("t_end", sim.t_end);
    put("dt", sim.dt);
    out << "record_stride = " << sim.record_stride << "\n";
    out << "regime_mode = " << to_string(sim.regime_mode) << "\n";
    out << "seed = " << sim.seed << "\n";
    put("burn_in", sim.burn_in);
    put("initial_y0", sim.initial.y0);
    put("initial_ks0", sim.initial.ks0);
    put("initial_kd0", sim.initial.kd0);
    put("initial_s0", sim.initial.s0);
    put("initial_h0", sim.initial.h0);
    put("initial_xi0", sim.initial.xi0);
    return out.str();
}

}  // namespace dynsolow
