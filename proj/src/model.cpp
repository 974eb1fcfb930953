#include "mildex/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace mildex {

void ModelConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("ModelConfig: " + msg); };
    if (!(gamma1 > 0.0) || !std::isfinite(gamma1)) fail("gamma1 must be positive");
    if (!(gamma2 > 0.0) || !std::isfinite(gamma2)) fail("gamma2 must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
    if (n < 2) fail("n must be at least 2");
    if (n > max_horizon) fail("n exceeds the overflow-safe horizon cap of " + std::to_string(max_horizon));
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma must be positive");
    const double k = std::pow(static_cast<double>(n), alpha);
    if (!(k > 1.0 && k < static_cast<double>(n))) fail("derived k_n = n^alpha must satisfy 1 < k_n < n");
}

double ModelConfig::k_n() const { return std::pow(static_cast<double>(n), alpha); }

EffectiveParams effective_params(const ModelConfig& config) {
    config.validate();
    const double k = config.k_n();
    const double theta_mag = 1.0 + config.gamma1 / k;
    const double rho_mag = 1.0 + config.gamma2 / k;
    return EffectiveParams{
        config.theta_negative() ? -theta_mag : theta_mag,
        config.rho_negative() ? -rho_mag : rho_mag,
        k,
    };
}

SamplePath path_from_noise(const ModelConfig& config, std::vector<double> noise) {
    const auto p = effective_params(config);
    const int n = config.n;
    if (static_cast<int>(noise.size()) != n)
        throw std::invalid_argument("path_from_noise: noise length must equal n");

    SamplePath path;
    path.config = config;
    path.v = std::move(noise);
    path.eps.assign(static_cast<std::size_t>(n) + 1, 0.0);
    path.x.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        path.eps[k] = p.rho_n * path.eps[k - 1] + path.v[k - 1];
        path.x[k] = p.theta_n * path.x[k - 1] + path.eps[k];
    }
    return path;
}

SamplePath simulate(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    NoiseSampler sampler(config.noise, config.sigma, seed);
    std::vector<double> noise(static_cast<std::size_t>(config.n));
    for (auto& value : noise) value = sampler.next();
    return path_from_noise(config, std::move(noise));
}

double signed_pow(double base, int exponent) {
    const double mag = std::pow(std::abs(base), static_cast<double>(exponent));
    const bool negative = base < 0.0 && (exponent & 1);
    return negative ? -mag : mag;
}

namespace {

bool distinct_roots_ok(double theta, double rho, double gap_threshold) {
    return std::abs(theta - rho) >= gap_threshold * (std::abs(theta) + std::abs(rho));
}

} // namespace

ClosedFormValue closed_form_x(const SamplePath& path, int k, double gap_threshold) {
    if (k < 1 || k > path.n()) throw std::out_of_range("closed_form_x: k out of 1..n");
    const auto p = effective_params(path.config);

    if (path.config.equal_roots()) {
        // X_k = theta^k * sum_{l<=k} (k-l+1) theta^{-l} V_l
        double sum = 0.0;
        double inv_pow = 1.0 / p.theta_n;
        for (int l = 1; l <= k; ++l) {
            sum += static_cast<double>(k - l + 1) * inv_pow * path.noise_at(l);
            inv_pow /= p.theta_n;
        }
        return {signed_pow(p.theta_n, k) * sum, true};
    }

    if (!distinct_roots_ok(p.theta_n, p.rho_n, gap_threshold))
        throw std::domain_error("closed_form_x: roots closer than the degeneracy threshold");

    // X_k = theta/(theta-rho) theta^k sum theta^{-l}V_l
    //     -   rho/(theta-rho)   rho^k sum   rho^{-l}V_l
    double sum_theta = 0.0;
    double sum_rho = 0.0;
    double inv_theta = 1.0 / p.theta_n;
    double inv_rho = 1.0 / p.rho_n;
    for (int l = 1; l <= k; ++l) {
        sum_theta += inv_theta * path.noise_at(l);
        sum_rho += inv_rho * path.noise_at(l);
        inv_theta /= p.theta_n;
        inv_rho /= p.rho_n;
    }
    const double gap = p.theta_n - p.rho_n;
    const double value = p.theta_n / gap * signed_pow(p.theta_n, k) * sum_theta -
                         p.rho_n / gap * signed_pow(p.rho_n, k) * sum_rho;
    return {value, false};
}

std::vector<double> closed_form_path(const SamplePath& path, double gap_threshold) {
    const auto p = effective_params(path.config);
    const int n = path.n();
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);

    if (path.config.equal_roots()) {
        // Running sums: D_k = sum theta^{-l}V_l, C_k = sum (k-l+1) theta^{-l}V_l,
        // with C_k = C_{k-1} + D_k.
        double d = 0.0;
        double c = 0.0;
        double inv_pow = 1.0 / p.theta_n;
        double theta_pow = 1.0;
        for (int k = 1; k <= n; ++k) {
            d += inv_pow * path.noise_at(k);
            c += d;
            inv_pow /= p.theta_n;
            theta_pow *= p.theta_n;
            out[k] = theta_pow * c;
        }
        return out;
    }

    if (!distinct_roots_ok(p.theta_n, p.rho_n, gap_threshold))
        throw std::domain_error("closed_form_path: roots closer than the degeneracy threshold");

    const double gap = p.theta_n - p.rho_n;
    double sum_theta = 0.0;
    double sum_rho = 0.0;
    double inv_theta = 1.0 / p.theta_n;
    double inv_rho = 1.0 / p.rho_n;
    double theta_pow = 1.0;
    double rho_pow = 1.0;
    for (int k = 1; k <= n; ++k) {
        sum_theta += inv_theta * path.noise_at(k);
        sum_rho += inv_rho * path.noise_at(k);
        inv_theta /= p.theta_n;
        inv_rho /= p.rho_n;
        theta_pow *= p.theta_n;
        rho_pow *= p.rho_n;
        out[k] = p.theta_n / gap * theta_pow * sum_theta - p.rho_n / gap * rho_pow * sum_rho;
    }
    return out;
}

namespace {

Regime flipped_regime(Regime regime) {
    switch (regime) {
        case Regime::PP: return Regime::MM;
        case Regime::MM: return Regime::PP;
        case Regime::PM: return Regime::MP;
        case Regime::MP: return Regime::PM;
    }
    return Regime::PP;
}

} // namespace

SamplePath sign_flip(const SamplePath& path) {
    SamplePath flipped = path;
    flipped.config.regime = flipped_regime(path.config.regime);
    // (-1)^k leaves even k untouched; odd k negate, which is exact.
    for (int k = 1; k <= path.n(); k += 2) {
        flipped.v[k - 1] = -path.v[k - 1];
        flipped.eps[k] = -path.eps[k];
        flipped.x[k] = -path.x[k];
    }
    return flipped;
}

} // namespace mildex
