#include "mildex/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace mildex {

FunctionalSet compute_functionals(const SamplePath& path, SummationMode mode) {
    const auto p = effective_params(path.config);
    const int n = path.n();
    const double inv_sqrt_k = 1.0 / std::sqrt(p.k_n);

    Accumulator xi_theta(mode), xi_rho(mode), phi_theta(mode);
    {
        double inv_theta = 1.0 / p.theta_n;
        double inv_rho = 1.0 / p.rho_n;
        for (int l = 1; l <= n; ++l) {
            const double vl = path.noise_at(l);
            xi_theta.add(inv_theta * vl);
            xi_rho.add(inv_rho * vl);
            phi_theta.add(static_cast<double>(n - l + 1) * inv_theta * vl);
            inv_theta /= p.theta_n;
            inv_rho /= p.rho_n;
        }
    }

    // eta weights theta^{-(n-l)-1} grow toward l = n, so walk l downward and
    // let the running power decay (underflow at the early-l tail is harmless).
    Accumulator eta_theta(mode), eta_rho(mode);
    {
        double pow_theta = 1.0 / p.theta_n;
        double pow_rho = 1.0 / p.rho_n;
        for (int l = n; l >= 1; --l) {
            const double vl = path.noise_at(l);
            eta_theta.add(pow_theta * vl);
            eta_rho.add(pow_rho * vl);
            pow_theta /= p.theta_n;
            pow_rho /= p.rho_n;
        }
    }

    FunctionalSet fs;
    fs.xi_theta = inv_sqrt_k * xi_theta.total();
    fs.xi_rho = inv_sqrt_k * xi_rho.total();
    fs.eta_theta = inv_sqrt_k * eta_theta.total();
    fs.eta_rho = inv_sqrt_k * eta_rho.total();
    fs.phi_theta = inv_sqrt_k / static_cast<double>(n) * phi_theta.total();
    return fs;
}

double zeta_combination(const FunctionalSet& fs, const ModelConfig& config) {
    if (!(config.gamma1 == config.gamma2))
        throw std::invalid_argument("zeta_combination requires gamma1 == gamma2");
    const double k = config.k_n();
    const double n = static_cast<double>(config.n);
    return n * (fs.xi_theta - fs.phi_theta) / k + fs.xi_theta / (2.0 * config.gamma1);
}

Matrix4 sigma1_matrix(double gamma1, double gamma2, double sigma) {
    const double s2 = sigma * sigma;
    const double a = s2 / (2.0 * gamma1);
    const double b = s2 / (2.0 * gamma2);
    const double c = s2 / (gamma1 + gamma2);
    return Matrix4{{{a, 0.0, c, 0.0},
                    {0.0, a, 0.0, c},
                    {c, 0.0, b, 0.0},
                    {0.0, c, 0.0, b}}};
}

Matrix4 sigma2_matrix(double gamma1, double gamma2, double sigma) {
    const double s2 = sigma * sigma;
    const double a = s2 / (2.0 * gamma1);
    const double b = s2 / (2.0 * gamma2);
    return Matrix4{{{a, 0.0, 0.0, 0.0},
                    {0.0, a, 0.0, 0.0},
                    {0.0, 0.0, b, 0.0},
                    {0.0, 0.0, 0.0, b}}};
}

Matrix3 gamma_matrix(double gamma1, double sigma) {
    const double a = sigma * sigma / (2.0 * gamma1);
    return Matrix3{{{a, a, 0.0}, {a, a, 0.0}, {0.0, 0.0, a}}};
}

Matrix2 xi_matrix(double gamma, double sigma) {
    const double s2 = sigma * sigma;
    return Matrix2{{{s2 / (2.0 * gamma), s2 / (2.0 * gamma * gamma)},
                    {s2 / (2.0 * gamma * gamma), 5.0 * s2 / (8.0 * gamma * gamma * gamma)}}};
}

} // namespace mildex
