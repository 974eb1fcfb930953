// Seeded, embarrassingly parallel Monte Carlo campaigns. Replication i draws
// its own stream from (base_seed, i) and writes into slot i, so results are
// bit-identical regardless of worker count.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mildex/functionals.hpp"
#include "mildex/limit_laws.hpp"
#include "mildex/model.hpp"
#include "mildex/summation.hpp"

namespace mildex {

struct CampaignConfig {
    ModelConfig model;
    TheoremBranch branch = TheoremBranch::T1_1;
    int replications = 1000;
    std::uint64_t base_seed = 0;
    int workers = 1;
    std::string output_path; // empty: keep results in memory only
    SummationMode summation = SummationMode::Plain;
};

struct ReplicationRecord {
    int rep_index = 0;
    std::uint64_t seed = 0;
    double theta_hat = 0.0;
    double rho_hat = 0.0;
    double statistic = 0.0;
    bool finite = false;
};

struct CampaignResult {
    std::vector<double> statistics; // finite statistics, replication order
    std::vector<ReplicationRecord> records; // every replication
    std::vector<FunctionalSet> functionals;  // per replication, for CSV export
    CauchyRef ref{};
    double ks = 0.0;
    int nonfinite_count = 0;
    // more than 0.5% non-finite replications invalidates a fit
    bool nonfinite_cap_exceeded = false;
    double wall_seconds = 0.0;
};

// Runs the campaign; statistics ordered by replication index and bit-identical
// across worker counts. ks is computed when at least 2 finite statistics
// exist. When cfg.output_path is set, writes "<output_path>.csv" with the
// per-replication records (throws on I/O failure). Throws on invalid config
// or branch mismatch.
CampaignResult run_campaign(const CampaignConfig& cfg);

// Deterministic static partition of [0, count) over `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& body);

const char* branch_name(TheoremBranch branch);
TheoremBranch parse_branch(const std::string& name); // case-insensitive, throws

} // namespace mildex
