// Serialization: ModelConfig <-> JSON (strict field set), path and campaign
// CSV files, campaign summary JSON.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mildex/campaign.hpp"
#include "mildex/estimation.hpp"
#include "mildex/model.hpp"

namespace mildex {

const char* regime_name(Regime regime);
Regime parse_regime(const std::string& name); // case-insensitive, throws
const char* noise_name(NoiseKind noise);
NoiseKind parse_noise(const std::string& name);
const char* summation_name(SummationMode mode);

// Exactly the fields gamma1, gamma2, alpha, n, regime, sigma, noise.
nlohmann::json config_to_json(const ModelConfig& config);
// Requires all seven keys, rejects unknown keys, validates the result.
ModelConfig config_from_json(const nlohmann::json& j);

// Path CSV: header k,v,eps,x and one row per k = 0..n (v printed as 0 at k=0).
void write_path_csv(const SamplePath& path, const std::string& filename);
// Reads a path CSV back into vectors sized n (v) and n+1 (eps, x).
struct PathData {
    std::vector<double> v;
    std::vector<double> eps;
    std::vector<double> x;
};
PathData read_path_csv(const std::string& filename);

// Wraps bare path data so the estimators can run on files that carry no
// configuration (only lengths are validated).
SamplePath path_from_data(PathData data);

nlohmann::json estimate_to_json(const EstimateResult& est);

// Campaign CSV: rep_index,seed,theta_hat,rho_hat,statistic,finite_flag.
void write_campaign_csv(const CampaignResult& result, const std::string& filename);

// One functional row per replication, keyed by seed, for external analysis.
void write_functionals_csv(const CampaignResult& result, const std::string& filename);
// Summary with the effective config echoed back plus fit numbers; quantiles
// included when probs is non-empty.
nlohmann::json campaign_summary_json(const CampaignConfig& cfg, const CampaignResult& result,
                                     const std::vector<double>& quantile_probs = {});

void write_text_file(const std::string& filename, const std::string& contents);

} // namespace mildex
