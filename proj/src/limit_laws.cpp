#include "mildex/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mildex/functionals.hpp"

namespace mildex {

bool branch_applicable(TheoremBranch branch, const ModelConfig& config) {
    const bool same = config.same_sign();
    switch (branch) {
        case TheoremBranch::T1_1: return same && config.gamma1 > config.gamma2;
        case TheoremBranch::T1_2: return same && config.gamma2 > config.gamma1;
        case TheoremBranch::T1_3: return same && config.gamma1 == config.gamma2;
        case TheoremBranch::T2_1: return !same && config.gamma1 > config.gamma2;
        case TheoremBranch::T2_2: return !same && config.gamma2 > config.gamma1;
    }
    return false;
}

void require_applicable(TheoremBranch branch, const ModelConfig& config) {
    if (!branch_applicable(branch, config))
        throw BranchMismatch("theorem branch not applicable to this configuration "
                             "(check sign regime and gamma ordering)");
}

namespace {

// theta^n (P - theta S) / rho^n expressed through the exact decomposition
//   P - theta S = c1 k theta^n rho^n xi_t xi_r + c2 k rho^{2n} xi_r^2
//               + M/(1-tr) + rho L/((1-tr)(1-r^2)) + 2 rho^2 EV/((1-tr)(1-r^2)),
// so every term is evaluated at its own scale and nothing is lost to
// cancellation against P itself.
double centered_num_theta(const EstimateResult& est, const EffectiveParams& p, int n) {
    const double t = p.theta_n, r = p.rho_n, k = p.k_n;
    const double tr = t * r;
    const double tn = signed_pow(t, n);
    const double rn = signed_pow(r, n);
    const double q = signed_pow(t / r, n);

    const double c1 = tr / ((tr - 1.0) * (t - r));
    const double c2 = r * r / ((t - r) * (1.0 - r * r));
    const double remainder = est.agg.M_n / (1.0 - tr) +
                             r * est.agg.L_n / ((1.0 - tr) * (1.0 - r * r)) +
                             2.0 * r * r * est.agg.EV_n / ((1.0 - tr) * (1.0 - r * r));

    return c1 * k * (tn * tn) * est.fs.xi_theta * est.fs.xi_rho +
           c2 * k * (tn * rn) * est.fs.xi_rho * est.fs.xi_rho + q * remainder;
}

// rho^n (P - rho S) / theta^n through the companion decomposition
//   P - rho S = d1 k theta^n rho^n xi_t xi_r + d2 k theta^{2n} xi_t^2
//             + [theta L + (theta^2+1-2 theta rho) M + 2 theta rho EV]
//               / ((1-tr)(1-theta^2)),
// which follows from the P and S decompositions plus the endpoint closed
// forms for X_n and eps_n (the rho^{2n} xi_r^2 contributions cancel
// identically).
double centered_num_rho(const EstimateResult& est, const EffectiveParams& p, int n) {
    const double t = p.theta_n, r = p.rho_n, k = p.k_n;
    const double tr = t * r;
    const double tn = signed_pow(t, n);
    const double rn = signed_pow(r, n);
    const double q = signed_pow(r / t, n);

    const double d1 = tr / ((1.0 - tr) * (t - r));
    const double d2 = t * t / ((t * t - 1.0) * (t - r));
    const double denom = (1.0 - tr) * (1.0 - t * t);
    const double remainder = (t * est.agg.L_n + (t * t + 1.0 - 2.0 * tr) * est.agg.M_n +
                              2.0 * tr * est.agg.EV_n) /
                             denom;

    return d1 * k * (rn * rn) * est.fs.xi_theta * est.fs.xi_rho +
           d2 * k * (tn * rn) * est.fs.xi_theta * est.fs.xi_theta + q * remainder;
}

} // namespace

double normalized_statistic(TheoremBranch branch, const EstimateResult& est,
                            const ModelConfig& config) {
    require_applicable(branch, config);
    const auto p = effective_params(config);
    const double S = est.agg.S_n_minus_1;
    if (S == 0.0) return std::numeric_limits<double>::quiet_NaN();

    const double g1 = config.gamma1, g2 = config.gamma2;
    const int n = config.n;

    switch (branch) {
        case TheoremBranch::T1_1: {
            if (!est.has_functionals)
                throw std::invalid_argument("normalized_statistic: estimate lacks functionals");
            const double pre = (g1 + g2) / (2.0 * g1 * (g1 - g2));
            return pre * p.k_n * centered_num_theta(est, p, n) / S;
        }
        case TheoremBranch::T2_1: {
            if (!est.has_functionals)
                throw std::invalid_argument("normalized_statistic: estimate lacks functionals");
            const double pre = std::sqrt(g2 / g1) / (2.0 * g1);
            return pre * p.k_n * centered_num_theta(est, p, n) / S;
        }
        case TheoremBranch::T1_2: {
            if (!est.has_functionals)
                throw std::invalid_argument("normalized_statistic: estimate lacks functionals");
            const double pre = (g1 + g2) / (2.0 * g2 * (g2 - g1));
            return pre * p.k_n * centered_num_rho(est, p, n) / S;
        }
        case TheoremBranch::T2_2: {
            if (!est.has_functionals)
                throw std::invalid_argument("normalized_statistic: estimate lacks functionals");
            const double pre = std::sqrt(g1 / g2) / (2.0 * g2);
            return pre * p.k_n * centered_num_rho(est, p, n) / S;
        }
        case TheoremBranch::T1_3: {
            // n(theta_hat - theta) - theta = [n(P - theta S) - theta S]/S; the
            // cancellations here are polynomial in n/k, well within doubles.
            const double diff = est.agg.P_n - p.theta_n * S;
            const double nd = static_cast<double>(n);
            return (nd / p.k_n) * (nd * diff - p.theta_n * S) / S;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

CauchyRef cauchy_reference(TheoremBranch branch, const ModelConfig& config) {
    require_applicable(branch, config);
    const double g1 = config.gamma1, g2 = config.gamma2;
    // MM statistics are the negations of the flipped-path PP statistics, so
    // their limit locations negate while scales are unchanged.
    const double sign = config.theta_negative() ? -1.0 : 1.0;
    switch (branch) {
        case TheoremBranch::T1_1:
            return {sign * 2.0 * g1 / (g1 + g2),
                    std::sqrt(g1 / g2) * (g1 - g2) / (g1 + g2)};
        case TheoremBranch::T1_2:
            return {sign * 2.0 * g2 / (g1 + g2),
                    std::sqrt(g2 / g1) * (g2 - g1) / (g1 + g2)};
        case TheoremBranch::T1_3:
            return {sign / g1, 1.0 / (2.0 * g1)};
        case TheoremBranch::T2_1:
        case TheoremBranch::T2_2:
            return {0.0, 1.0};
    }
    return {0.0, 1.0};
}

CauchyRef normal_ratio_law(double var_a, double var_b, double cov) {
    const double location = cov / var_a;
    return {location, std::sqrt(var_b / var_a - location * location)};
}

double cauchy_cdf(double x, const CauchyRef& ref) {
    return 0.5 + std::atan((x - ref.location) / ref.scale) / std::numbers::pi;
}

double cauchy_quantile(double p, const CauchyRef& ref) {
    return ref.location + ref.scale * std::tan(std::numbers::pi * (p - 0.5));
}

double ks_distance(const std::vector<double>& samples, const CauchyRef& ref) {
    if (samples.size() < 2)
        throw std::invalid_argument("ks_distance: need at least 2 samples");
    for (double s : samples)
        if (!std::isfinite(s))
            throw std::invalid_argument("ks_distance: non-finite sample");

    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double r = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cauchy_cdf(sorted[i], ref);
        const double lo = f - static_cast<double>(i) / r;
        const double hi = static_cast<double>(i + 1) / r - f;
        d = std::max(d, std::max(lo, hi));
    }
    return d;
}

namespace {

// interpolated order statistic (the usual type-7 definition)
double empirical_quantile(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

} // namespace

std::vector<QuantilePair> quantile_table(const std::vector<double>& samples,
                                         const CauchyRef& ref,
                                         const std::vector<double>& probs) {
    if (samples.empty()) throw std::invalid_argument("quantile_table: empty sample");
    for (double p : probs)
        if (!(p > 0.0 && p < 1.0))
            throw std::invalid_argument("quantile_table: probabilities must lie in (0,1)");

    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    std::vector<QuantilePair> table;
    table.reserve(probs.size());
    for (double p : probs)
        table.push_back({p, empirical_quantile(sorted, p), cauchy_quantile(p, ref)});
    return table;
}

CauchyFit fit_cauchy_median_iqr(const std::vector<double>& samples) {
    if (samples.size() < 4)
        throw std::invalid_argument("fit_cauchy_median_iqr: need at least 4 samples");
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    const double q25 = empirical_quantile(sorted, 0.25);
    const double q50 = empirical_quantile(sorted, 0.50);
    const double q75 = empirical_quantile(sorted, 0.75);
    return {q50, 0.5 * (q75 - q25)};
}

CauchyFit simulate_normal_ratio_fit(TheoremBranch branch, const ModelConfig& config,
                                    std::size_t n_samples, std::uint64_t seed) {
    require_applicable(branch, config);
    const double g1 = config.gamma1, g2 = config.gamma2;
    const double s2 = config.sigma * config.sigma;

    // (A, B) covariance for the limiting ratio B/A, plus an outer multiplier
    // applied to the sampled ratio (T2 statistics carry one).
    double var_a = 1.0, var_b = 1.0, cov = 0.0, outer = 1.0;
    switch (branch) {
        case TheoremBranch::T1_1: // xi_rho / xi_theta
            var_a = s2 / (2.0 * g1);
            var_b = s2 / (2.0 * g2);
            cov = s2 / (g1 + g2);
            break;
        case TheoremBranch::T1_2: // xi_theta / xi_rho
            var_a = s2 / (2.0 * g2);
            var_b = s2 / (2.0 * g1);
            cov = s2 / (g1 + g2);
            break;
        case TheoremBranch::T1_3: { // zeta_theta / phi_theta
            const auto xi = xi_matrix(g1, config.sigma);
            var_a = xi[0][0];
            var_b = xi[1][1];
            cov = xi[0][1];
            break;
        }
        case TheoremBranch::T2_1: // sqrt(g2/g1) xi_rho / xi_theta, independent
            var_a = s2 / (2.0 * g1);
            var_b = s2 / (2.0 * g2);
            outer = std::sqrt(g2 / g1);
            break;
        case TheoremBranch::T2_2: // sqrt(g1/g2) xi_theta / xi_rho, independent
            var_a = s2 / (2.0 * g2);
            var_b = s2 / (2.0 * g1);
            outer = std::sqrt(g1 / g2);
            break;
    }

    // alternating-sign regimes negate the limiting ratio
    if (config.theta_negative()) outer = -outer;

    const double sd_a = std::sqrt(var_a);
    const double slope = cov / sd_a;
    const double resid_sd = std::sqrt(var_b - cov * cov / var_a);

    NoiseSampler gauss(NoiseKind::Gaussian, 1.0, seed);
    std::vector<double> ratios(n_samples);
    for (auto& value : ratios) {
        const double z1 = gauss.next();
        const double z2 = gauss.next();
        const double a = sd_a * z1;
        const double b = slope * z1 + resid_sd * z2;
        value = outer * b / a;
    }
    return fit_cauchy_median_iqr(ratios);
}

} // namespace mildex
