// Normalized statistics of the two limit theorems and their analytic Cauchy
// references, plus goodness-of-fit diagnostics (KS distance, quantile tables)
// and the bivariate-normal-ratio Monte Carlo oracle that gates the derived
// scale formulas.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "mildex/estimation.hpp"
#include "mildex/model.hpp"

namespace mildex {

// T1_* apply to same-sign regimes (PP, or MM via the alternating-sign map),
// T2_* to opposite-sign regimes. The trailing digit selects the rate case:
// 1: gamma1 > gamma2, 2: gamma2 > gamma1, 3: gamma1 == gamma2 (T1 only).
enum class TheoremBranch { T1_1, T1_2, T1_3, T2_1, T2_2 };

class BranchMismatch : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct CauchyRef {
    double location = 0.0;
    double scale = 1.0;
};

bool branch_applicable(TheoremBranch branch, const ModelConfig& config);
// throws BranchMismatch with a description when not applicable
void require_applicable(TheoremBranch branch, const ModelConfig& config);

// The theorem statistic for one estimated path:
//   T1_1: (g1+g2)/(2 g1 (g1-g2)) * k theta^n rho^-n (theta_hat - theta)
//   T1_2: (g1+g2)/(2 g2 (g2-g1)) * rho^n theta^-n (k(theta_hat - theta) - c)
//         with c = g2-g1 for PP and g1-g2 for MM (equivalently k(theta_hat - rho))
//   T1_3: (n/k) (n(theta_hat - theta) - theta)
//   T2_1: 1/(2 g1) sqrt(g2/g1) * k theta^n rho^-n (theta_hat - theta)
//   T2_2: 1/(2 g2) sqrt(g1/g2) * k rho^n theta^-n (theta_hat - rho)
//
// The exponentially-normalized branches evaluate the centered numerator
// through the exact finite-sample decompositions of P_n - theta S and
// P_n - rho S (in terms of xi functionals and the L/M/EV aggregates): at the
// design horizons the direct subtraction sits far below one ulp of theta_hat,
// so the decomposition route is the only numerically meaningful evaluation.
// Requires est.has_functionals for those branches. Returns NaN when the
// denominator S_{n-1,n} is zero.
double normalized_statistic(TheoremBranch branch, const EstimateResult& est,
                            const ModelConfig& config);

// Analytic limit law. Locations flip sign for MM/MP regimes; T2 branches are
// standard Cauchy. Scales for T1 come from the ratio-of-correlated-normals
// law applied to the limiting covariance matrices (gated by the MC oracle).
CauchyRef cauchy_reference(TheoremBranch branch, const ModelConfig& config);

// Law of B/A for zero-mean jointly normal (A, B):
// Cauchy(cov/var_a, sqrt(var_b/var_a - (cov/var_a)^2)).
CauchyRef normal_ratio_law(double var_a, double var_b, double cov);

double cauchy_cdf(double x, const CauchyRef& ref);
double cauchy_quantile(double p, const CauchyRef& ref);

// Sup-norm distance between the empirical CDF and the reference CDF.
// Throws std::invalid_argument on fewer than 2 samples or any non-finite
// sample (callers filter non-finite values and report them separately).
double ks_distance(const std::vector<double>& samples, const CauchyRef& ref);

struct QuantilePair {
    double prob;
    double empirical;
    double analytic;
};

// Empirical (interpolated order statistic) vs analytic quantiles; probs must
// lie strictly inside (0,1).
std::vector<QuantilePair> quantile_table(const std::vector<double>& samples,
                                         const CauchyRef& ref,
                                         const std::vector<double>& probs);

struct CauchyFit {
    double location;
    double scale;
};

// Median / half-IQR fit (for a Cauchy the quartiles sit at location +- scale).
CauchyFit fit_cauchy_median_iqr(const std::vector<double>& samples);

// Samples the limiting normal ratio for a branch directly from its covariance
// matrix and fits median/IQR: the independent oracle for the hard-coded
// reference scales.
CauchyFit simulate_normal_ratio_fit(TheoremBranch branch, const ModelConfig& config,
                                    std::size_t n_samples, std::uint64_t seed);

} // namespace mildex
