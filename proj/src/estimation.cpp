#include "mildex/estimation.hpp"

#include <cmath>
#include <limits>

namespace mildex {

Aggregates compute_aggregates(const SamplePath& path, SummationMode mode) {
    const int n = path.n();
    Accumulator P(mode), S1(mode), S(mode), L(mode), M(mode), N(mode), EV(mode);
    for (int k = 1; k <= n; ++k) {
        const double xk = path.x[k];
        const double xk1 = path.x[k - 1];
        const double vk = path.noise_at(k);
        P.add(xk * xk1);
        S1.add(xk1 * xk1);
        S.add(xk * xk);
        L.add(vk * vk);
        M.add(xk1 * vk);
        if (k >= 2) N.add(path.x[k - 2] * vk);
        EV.add(path.eps[k - 1] * vk);
    }
    Aggregates agg;
    agg.P_n = P.total();
    agg.S_n_minus_1 = S1.total();
    agg.S_n = S.total();
    agg.L_n = L.total();
    agg.M_n = M.total();
    agg.N_n = N.total();
    agg.EV_n = EV.total();
    return agg;
}

std::optional<EstimateResult> estimate_theta(const SamplePath& path, SummationMode mode) {
    EstimateResult result;
    result.agg = compute_aggregates(path, mode);
    if (result.agg.S_n_minus_1 == 0.0) return std::nullopt;

    result.theta_hat = result.agg.P_n / result.agg.S_n_minus_1;
    result.rho_hat = std::numeric_limits<double>::quiet_NaN();

    const int n = path.n();
    result.residuals.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k)
        result.residuals[k] = path.x[k] - result.theta_hat * path.x[k - 1];
    return result;
}

std::optional<double> estimate_rho(const SamplePath& path, double theta_hat,
                                   SummationMode mode) {
    const int n = path.n();
    Accumulator num(mode), den(mode);
    double prev = 0.0; // eps_hat_0 = 0
    for (int k = 1; k <= n; ++k) {
        const double cur = path.x[k] - theta_hat * path.x[k - 1];
        num.add(cur * prev);
        den.add(prev * prev);
        prev = cur;
    }
    if (den.total() == 0.0) return std::nullopt;
    return num.total() / den.total();
}

std::optional<EstimateResult> estimate_full(const SamplePath& path, SummationMode mode) {
    auto result = estimate_theta(path, mode);
    if (!result) return std::nullopt;
    if (auto rho = estimate_rho(path, result->theta_hat, mode)) result->rho_hat = *rho;
    result->fs = compute_functionals(path, mode);
    result->has_functionals = true;
    return result;
}

} // namespace mildex
