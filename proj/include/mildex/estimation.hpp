// Least-squares estimators theta_hat, rho_hat and the path aggregates
// P, S, L, M, N plus the cross term sum eps_{k-1} V_k that the finite-sample
// decompositions are written in.
#pragma once

#include <optional>
#include <vector>

#include "mildex/functionals.hpp"
#include "mildex/model.hpp"
#include "mildex/summation.hpp"

namespace mildex {

struct Aggregates {
    double P_n = 0.0;         // sum_{k=1}^n X_k X_{k-1}
    double S_n_minus_1 = 0.0; // sum_{k=1}^n X_{k-1}^2
    double S_n = 0.0;         // sum_{k=1}^n X_k^2
    double L_n = 0.0;         // sum_{k=1}^n V_k^2
    double M_n = 0.0;         // sum_{k=1}^n X_{k-1} V_k
    double N_n = 0.0;         // sum_{k=2}^n X_{k-2} V_k
    double EV_n = 0.0;        // sum_{k=1}^n eps_{k-1} V_k
};

// Single pass over the path in index order (deterministic for either mode).
Aggregates compute_aggregates(const SamplePath& path,
                              SummationMode mode = SummationMode::Plain);

struct EstimateResult {
    double theta_hat = 0.0;
    double rho_hat = 0.0;             // NaN when the rho denominator degenerates
    std::vector<double> residuals;    // eps_hat_0..eps_hat_n with eps_hat_0 = 0
    Aggregates agg;
    FunctionalSet fs;                 // populated by estimate_full only
    bool has_functionals = false;
};

// theta_hat = P_n / S_{n-1,n}. Empty when S_{n-1,n} == 0 (degenerate path,
// e.g. zero noise) -- an error value rather than an abort so Monte Carlo
// batches can record and skip the replication.
std::optional<EstimateResult> estimate_theta(const SamplePath& path,
                                             SummationMode mode = SummationMode::Plain);

// rho_hat from the residuals eps_hat_k = X_k - theta_hat X_{k-1}, eps_hat_0 = 0,
// summing k = 1..n in both numerator and denominator. Empty when all
// eps_hat_{k-1} vanish.
std::optional<double> estimate_rho(const SamplePath& path, double theta_hat,
                                   SummationMode mode = SummationMode::Plain);

// theta_hat + rho_hat + aggregates + functionals in one call.
std::optional<EstimateResult> estimate_full(const SamplePath& path,
                                            SummationMode mode = SummationMode::Plain);

} // namespace mildex
