// Registered property suites: identity sweeps over random configurations,
// empirical covariance checks against the limiting matrices, estimator
// concentration checks, and the Cauchy tail-index check.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mildex/identities.hpp"
#include "mildex/model.hpp"

namespace mildex {

struct SuiteReport {
    std::string suite_id;
    bool passed = false;
    std::vector<std::string> lines; // one line per check, human readable
};

// Known ids: every identity name ("S_decomp", ..., "lemma2_equal") plus
// "covariance_pp", "covariance_pm", "covariance_gamma", "covariance_xi",
// "prop5_pp", "prop5_pm", "prop5_equal", "tail_index".
// Throws std::invalid_argument on an unknown id.
SuiteReport run_property_suite(const std::string& suite_id, std::uint64_t base_seed,
                               int workers = 1);

std::vector<std::string> registered_suites();

// --- building blocks shared with the acceptance runner ---

struct IdentitySweepStats {
    int evaluated = 0;
    int skipped = 0;
    int unflagged_failures = 0;
    double max_residual_plain = 0.0;
    double max_residual_compensated = 0.0;
    std::vector<std::string> failure_lines;
};

// Evaluates one identity on `configs` random nondegenerate configurations in
// both summation modes.
IdentitySweepStats identity_sweep(IdentityId id, int configs, std::uint64_t base_seed,
                                  int n_min = 8, int n_max = 400);

// One simulated path per configuration, all catalog identities on each.
std::vector<IdentitySweepStats> full_catalog_sweep(int configs, std::uint64_t base_seed,
                                                   int n_min = 8, int n_max = 400);

struct CovarianceEntryCheck {
    std::string label;
    double empirical = 0.0;
    double expected = 0.0;
    double standard_error = 0.0; // from 10 batches
    double z = 0.0;              // (empirical - expected) / standard_error
};

// Sample covariance of (xi_theta, eta_theta, xi_rho, eta_rho) over
// `replications` seeded paths against Sigma_1 (same-sign) or Sigma_2
// (opposite-sign), entrywise with batch standard errors.
std::vector<CovarianceEntryCheck> covariance_check(const ModelConfig& config,
                                                   int replications,
                                                   std::uint64_t base_seed, int workers);

// cov(phi, xi_theta) and cov(phi, eta_theta) against the Gamma matrix.
std::vector<CovarianceEntryCheck> gamma_covariance_check(const ModelConfig& config,
                                                         int replications,
                                                         std::uint64_t base_seed, int workers);

// var/cov of (phi, zeta) against the Xi matrix (equal roots only).
std::vector<CovarianceEntryCheck> xi_covariance_check(const ModelConfig& config,
                                                      int replications,
                                                      std::uint64_t base_seed, int workers);

struct ConcentrationResult {
    double median = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

// Median of k(theta_hat - theta) vs gamma2 - gamma1 (same-sign, gamma2 > gamma1).
ConcentrationResult prop5_pp_check(const ModelConfig& config, int replications,
                                   std::uint64_t base_seed, int workers);
// Median of theta_hat - theta vs rho_n - theta_n (opposite-sign, gamma2 > gamma1).
ConcentrationResult prop5_pm_check(const ModelConfig& config, int replications,
                                   std::uint64_t base_seed, int workers);
// Median of n(theta_hat - theta) - theta vs 0 (equal roots).
ConcentrationResult prop5_equal_check(const ModelConfig& config, int replications,
                                      std::uint64_t base_seed, int workers);

struct TailIndexResult {
    double fraction = 0.0; // of |stat - location| > 10 scale
    bool passed = false;   // within [0.03, 0.10]
};

TailIndexResult tail_index_check(std::uint64_t base_seed, int workers);

} // namespace mildex
