// Model core: the double autoregression X_k = theta_n X_{k-1} + eps_k,
// eps_k = rho_n eps_{k-1} + V_k with both roots mildly explosive,
// |theta_n| = 1 + gamma1/k_n, |rho_n| = 1 + gamma2/k_n, k_n = n^alpha.
// Provides path simulation by recursion plus closed-form reconstructions
// used as oracles by the identity verifier.
#pragma once

#include <cstdint>
#include <vector>

#include "mildex/rng.hpp"

namespace mildex {

// Sign regime of (theta_n, rho_n): P = +(1 + gamma/k_n), M = -(1 + gamma/k_n).
enum class Regime { PP, PM, MM, MP };

struct EffectiveParams {
    double theta_n;
    double rho_n;
    double k_n;
};

struct ModelConfig {
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    double alpha = 1.0 / 3.0;
    int n = 400;
    Regime regime = Regime::PP;
    double sigma = 1.0;
    NoiseKind noise = NoiseKind::Gaussian;

    // Horizons above this make theta^{2n} flirt with double overflow for
    // moderate gammas, so reject early rather than emit infinities.
    static constexpr int max_horizon = 2000;

    // throws std::invalid_argument on any violated invariant
    void validate() const;

    double k_n() const;
    bool theta_negative() const { return regime == Regime::MM || regime == Regime::MP; }
    bool rho_negative() const { return regime == Regime::PM || regime == Regime::MM; }
    bool same_sign() const { return regime == Regime::PP || regime == Regime::MM; }
    // exact equal roots: same sign and bitwise-equal gammas
    bool equal_roots() const { return same_sign() && gamma1 == gamma2; }
};

// (theta_n, rho_n, k_n) with signs applied per regime; validates config.
EffectiveParams effective_params(const ModelConfig& config);

// One realization of the model. v holds V_1..V_n (length n); eps and x hold
// indices 0..n with eps[0] = x[0] = 0 exactly.
struct SamplePath {
    ModelConfig config;
    std::vector<double> v;
    std::vector<double> eps;
    std::vector<double> x;

    int n() const { return static_cast<int>(v.size()); }
    double noise_at(int k) const { return v[static_cast<std::size_t>(k) - 1]; } // k in 1..n
};

// Builds the path by the defining recursion from injected noise (V_1..V_n).
SamplePath path_from_noise(const ModelConfig& config, std::vector<double> noise);

// Draws noise from the configured distribution and runs the recursion.
// Deterministic for fixed (config, seed).
SamplePath simulate(const ModelConfig& config, std::uint64_t seed);

struct ClosedFormValue {
    double value;
    bool equal_roots_branch;
};

// Default relative gap below which the distinct-roots closed form is refused
// (it divides by theta - rho). Exactly-equal roots use the equal-roots form.
inline constexpr double kRootGapThreshold = 1e-6;

// Closed-form X_k from the noise alone: the two-geometric-series form for
// distinct roots, the multiplicity-two form when theta_n == rho_n.
// Throws std::domain_error when 0 < |theta-rho| < threshold*(|theta|+|rho|).
ClosedFormValue closed_form_x(const SamplePath& path, int k,
                              double gap_threshold = kRootGapThreshold);

// All of X_1..X_n in one O(n) pass (same branch logic as closed_form_x).
std::vector<double> closed_form_path(const SamplePath& path,
                                     double gap_threshold = kRootGapThreshold);

// The alternating-sign map Y_k = (-1)^k X_k, W_k = (-1)^k V_k, which turns a
// (theta, rho) path into the (-theta, -rho) path exactly. Involutive and
// bit-exact (multiplications by +-1 only).
SamplePath sign_flip(const SamplePath& path);

// |x|^n with the sign of x^n for integer n; avoids pow's negative-base rules.
double signed_pow(double base, int exponent);

} // namespace mildex
