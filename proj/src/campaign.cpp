#include "mildex/campaign.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mildex/estimation.hpp"
#include "mildex/io.hpp"

namespace mildex {

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int begin = w * chunk;
        const int end = std::min(count, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([begin, end, &body] {
            for (int i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

CampaignResult run_campaign(const CampaignConfig& cfg) {
    if (cfg.replications < 1)
        throw std::invalid_argument("run_campaign: replications must be >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("run_campaign: workers must be >= 1");
    cfg.model.validate();
    require_applicable(cfg.branch, cfg.model);

    const auto start = std::chrono::steady_clock::now();

    CampaignResult result;
    result.ref = cauchy_reference(cfg.branch, cfg.model);
    result.records.assign(static_cast<std::size_t>(cfg.replications), ReplicationRecord{});
    result.functionals.assign(static_cast<std::size_t>(cfg.replications), FunctionalSet{});

    parallel_for(cfg.replications, cfg.workers, [&](int i) {
        ReplicationRecord rec;
        rec.rep_index = i;
        rec.seed = replication_seed(cfg.base_seed, static_cast<std::uint64_t>(i));
        const SamplePath path = simulate(cfg.model, rec.seed);
        if (const auto est = estimate_full(path, cfg.summation)) {
            rec.theta_hat = est->theta_hat;
            rec.rho_hat = est->rho_hat;
            rec.statistic = normalized_statistic(cfg.branch, *est, cfg.model);
            rec.finite = std::isfinite(rec.statistic);
            result.functionals[static_cast<std::size_t>(i)] = est->fs;
        } else {
            rec.statistic = std::numeric_limits<double>::quiet_NaN();
            rec.finite = false;
        }
        result.records[static_cast<std::size_t>(i)] = rec;
    });

    // ordered post-pass: identical regardless of how the work was scheduled
    for (const auto& rec : result.records) {
        if (rec.finite)
            result.statistics.push_back(rec.statistic);
        else
            ++result.nonfinite_count;
    }
    result.nonfinite_cap_exceeded =
        result.nonfinite_count > 0.005 * static_cast<double>(cfg.replications);
    if (result.statistics.size() >= 2) result.ks = ks_distance(result.statistics, result.ref);

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!cfg.output_path.empty()) write_campaign_csv(result, cfg.output_path + ".csv");
    return result;
}

const char* branch_name(TheoremBranch branch) {
    switch (branch) {
        case TheoremBranch::T1_1: return "T1_1";
        case TheoremBranch::T1_2: return "T1_2";
        case TheoremBranch::T1_3: return "T1_3";
        case TheoremBranch::T2_1: return "T2_1";
        case TheoremBranch::T2_2: return "T2_2";
    }
    return "T1_1";
}

TheoremBranch parse_branch(const std::string& name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "T1_1") return TheoremBranch::T1_1;
    if (upper == "T1_2") return TheoremBranch::T1_2;
    if (upper == "T1_3") return TheoremBranch::T1_3;
    if (upper == "T2_1") return TheoremBranch::T2_1;
    if (upper == "T2_2") return TheoremBranch::T2_2;
    throw std::invalid_argument("unknown theorem branch: " + name);
}

} // namespace mildex
