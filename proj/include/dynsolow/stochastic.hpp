#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "dynsolow/errors.hpp"

namespace dynsolow {

// Fixed 64-bit mix used everywhere a seed is derived from another: substream
// split inside one run, grid-point seeds inside a sweep. Adding grid points
// never changes existing streams.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag);

// Substream tags for the per-run RNG split.
inline constexpr std::uint64_t kNoiseStreamTag = 1;
inline constexpr std::uint64_t kMicroStreamTag = 2;

// Exogenous news noise xi_t: Ornstein-Uhlenbeck, advanced by the exact
// discretization so its statistics are dt-independent. Confine one instance
// to one simulation worker.
class NoiseProcess {
public:
    NoiseProcess(double tau_xi, double sigma, std::uint64_t seed, double xi0 = 0.0)
        : xi_(xi0), tau_(tau_xi), sigma_(sigma), rng_(seed) {}

    // xi' = xi*e^(-dt/tau) + sigma*sqrt(1 - e^(-2dt/tau)) * eta, eta ~ N(0,1).
    double step(double dt);

    double value() const { return xi_; }
    double sigma() const { return sigma_; }
    double tau() const { return tau_; }

private:
    double xi_;
    double tau_;
    double sigma_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

struct MicroRates {
    double p_minus_plus;  // pessimist -> optimist, per day
    double p_plus_minus;  // optimist -> pessimist, per day
};

// Individual flip rates implied by peer influence F_s; the rates sum to
// 1/tau exactly.
MicroRates micro_transition_rates(double F_s, double tau, double alpha);

// Agent-level oracle for the sentiment equation: N managers with opinions
// in {-1,+1}, flipping independently at the micro transition rates. The
// ensemble mean converges to the ODE tau*s' = -s + tanh(alpha*F_s/2) as
// N -> infinity; alpha defaults to 2 so the absorbed form matches the macro
// equation with the beta coefficients as given.
class MicroEnsemble {
public:
    MicroEnsemble(std::size_t n, double tau, std::uint64_t seed, double alpha = 2.0);

    // Each agent flips with probability rate*dt. Throws StepTooLarge when
    // dt * max(rate) >= 1.
    void step(double F_s, double dt);

    double mean() const {  // s = (N+ - N-)/N
        return (2.0 * static_cast<double>(n_plus_) - static_cast<double>(states_.size())) /
               static_cast<double>(states_.size());
    }
    std::size_t size() const { return states_.size(); }
    double tau() const { return tau_; }
    double alpha() const { return alpha_; }

private:
    std::vector<std::int8_t> states_;  // +1 optimist, -1 pessimist
    std::size_t n_plus_;
    double tau_;
    double alpha_;
    std::mt19937_64 rng_;
};

}  // namespace dynsolow
