#include "dynsolow/stochastic.hpp"

#include <cmath>

namespace dynsolow {

namespace {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ splitmix64(tag));
}

double NoiseProcess::step(double dt) {
    const double decay = std::exp(-dt / tau_);
    const double kick = sigma_ * std::sqrt(1.0 - decay * decay);
    xi_ = xi_ * decay + kick * normal_(rng_);
    return xi_;
}

MicroRates micro_transition_rates(double F_s, double tau, double alpha) {
    if (!(tau > 0.0)) throw NonPositiveTimescale("tau", tau);
    MicroRates r;
    r.p_minus_plus = 1.0 / (tau * (1.0 + std::exp(-alpha * F_s)));
    r.p_plus_minus = 1.0 / (tau * (1.0 + std::exp(alpha * F_s)));
    return r;
}

MicroEnsemble::MicroEnsemble(std::size_t n, double tau, std::uint64_t seed, double alpha)
    : states_(n), tau_(tau), alpha_(alpha), rng_(seed) {
    if (!(tau > 0.0)) throw NonPositiveTimescale("tau", tau);
    // Balanced start: s = 0 (or as close as parity allows).
    for (std::size_t i = 0; i < n; ++i) states_[i] = (i % 2 == 0) ? 1 : -1;
    n_plus_ = (n + 1) / 2;
}

void MicroEnsemble::step(double F_s, double dt) {
    const MicroRates rates = micro_transition_rates(F_s, tau_, alpha_);
    const double p_up = rates.p_minus_plus * dt;    // pessimist flips
    const double p_down = rates.p_plus_minus * dt;  // optimist flips
    if (p_up >= 1.0 || p_down >= 1.0) {
        throw StepTooLarge("dt * max(rate) >= 1; reduce dt below tau");
    }
    for (auto& state : states_) {
        // 53-bit uniform in [0,1).
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        if (state > 0) {
            if (u < p_down) {
                state = -1;
                --n_plus_;
            }
        } else {
            if (u < p_up) {
                state = 1;
                ++n_plus_;
            }
        }
    }
}

}  // namespace dynsolow
