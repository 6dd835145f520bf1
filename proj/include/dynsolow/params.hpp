#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dynsolow/errors.hpp"

namespace dynsolow {

// Model constants. Defaults are the base case used throughout; time unit is
// the business day (250 business days = 1 year).
struct ModelParams {
    double rho = 1.0 / 3.0;     // capital share in production, 0 < rho < 1
    double epsilon = 2.5e-5;    // technology growth rate per day
    double tau_y = 1000.0;      // production adjustment timescale (days)
    double lambda = 0.15;       // savings rate, 0 < lambda < 1
    double delta = 2.0e-4;      // depreciation rate per day
    double c1 = 3.0;            // demand sensitivity to s-dot
    double c2 = 7.0e-4;         // demand sensitivity to s (per day)
    double beta1 = 1.1;         // sentiment herding factor
    double beta2 = 1.0;         // sentiment-information coupling
    double gamma = 2000.0;      // feedback strength (days)
    double tau_s = 250.0;       // sentiment timescale (days)
    double tau_h = 25.0;        // information timescale (days)
    double tau_xi = 5.0;        // news-noise decorrelation timescale (days)
    // Stationary noise standard deviation. The base-case value puts the
    // economy in the coherence-resonance regime with sentiment round trips
    // peaking in the 40-70 year band; smaller values lengthen the dwells.
    double sigma_xi = 1.3;
};

// Proof that a ModelParams passed validate(). Immutable; safe to share across
// simulation workers.
class ValidatedParams {
public:
    const ModelParams& operator*() const { return p_; }
    const ModelParams* operator->() const { return &p_; }

private:
    friend ValidatedParams validate(const ModelParams&, std::vector<std::string>*);
    explicit ValidatedParams(const ModelParams& p) : p_(p) {}
    ModelParams p_;
};

enum class RegimeMode {
    general,
    forced_supply,
    forced_demand,
    reduced_deterministic,
};

std::string to_string(RegimeMode mode);
RegimeMode regime_mode_from_string(const std::string& name);  // throws MalformedValue

struct InitialState {
    double y0 = 1.0 / 3.0;  // log output; default rho * kd0 (re-derived on load)
    double ks0 = 1.0;       // log capital supply
    double kd0 = 1.0;       // log capital demand
    double s0 = 0.0;        // sentiment, in (-1, 1)
    double h0 = 0.0;        // information, in (-1, 1)
    double xi0 = 0.0;       // news noise
};

struct SimConfig {
    double t_end = 100000.0;  // horizon (days); default 400 years
    double dt = 1.0;          // step size (days)
    int record_stride = 25;   // steps per recorded sample (monthly at dt = 1)
    RegimeMode regime_mode = RegimeMode::general;
    InitialState initial;
    std::uint64_t seed = 42;
    double burn_in = 0.0;  // discard horizon (days)
};

// Rejects hard invariant violations (NonPositiveTimescale, ShareOutOfRange,
// NegativeRate). Timescale-ordering violations are warnings, not errors;
// collected into *warnings when given.
ValidatedParams validate(const ModelParams& raw, std::vector<std::string>* warnings = nullptr);

struct DerivedQuantities {
    double R;               // Solow growth rate epsilon / (1 - rho), per day
    double omega_y;         // 1 / tau_y, per day
    double tech_timescale;  // 1 / epsilon, days (infinity when epsilon = 0)
};

DerivedQuantities derived_quantities(const ValidatedParams& p);

struct LoadedConfig {
    ValidatedParams params;
    SimConfig sim;
    std::vector<std::string> warnings;   // validation warnings
    std::vector<std::string> overrides;  // keys set by the document, in file order
};

// Plain-text `key = value` config, one per line, '#' comments. Unspecified
// keys take base-case defaults. Throws UnknownKey / MalformedValue / the
// validate errors.
LoadedConfig load_config(const std::string& text);

// Full key = value echo of a parameter set; load_config(serialize_config(...))
// round-trips exactly (17 significant digits).
std::string serialize_config(const ModelParams& p, const SimConfig& sim);

// %.17g rendering used for every floating-point value we print.
std::string format_double(double v);

}  // namespace dynsolow
