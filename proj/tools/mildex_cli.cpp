// Command-line front end: simulate paths, estimate coefficients, sweep the
// identity catalog, run Monte Carlo campaigns, and fit statistics against
// their limiting Cauchy references.
//
// Exit codes: 0 success, 1 assertion/check failure, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mildex/campaign.hpp"
#include "mildex/estimation.hpp"
#include "mildex/identities.hpp"
#include "mildex/io.hpp"
#include "mildex/limit_laws.hpp"
#include "mildex/model.hpp"
#include "mildex/suites.hpp"

namespace {

using namespace mildex;

struct ModelFlags {
    double gamma1 = 1.0, gamma2 = 1.0, alpha = 1.0 / 3.0, sigma = 1.0;
    int n = 400;
    std::string regime = "pp";
    std::string noise = "gaussian";
    std::string config_file;

    CLI::Option *opt_gamma1 = nullptr, *opt_gamma2 = nullptr, *opt_alpha = nullptr,
                *opt_sigma = nullptr, *opt_n = nullptr, *opt_regime = nullptr,
                *opt_noise = nullptr;

    void attach(CLI::App* cmd) {
        opt_n = cmd->add_option("--n", n, "sample size / horizon");
        opt_gamma1 = cmd->add_option("--gamma1", gamma1, "rate of theta_n's deviation from unity");
        opt_gamma2 = cmd->add_option("--gamma2", gamma2, "rate of rho_n's deviation from unity");
        opt_alpha = cmd->add_option("--alpha", alpha, "exponent of k_n = n^alpha");
        opt_regime = cmd->add_option("--regime", regime, "sign regime: pp, pm, mm, mp");
        opt_sigma = cmd->add_option("--sigma", sigma, "noise standard deviation");
        opt_noise = cmd->add_option("--noise", noise, "gaussian, rademacher, uniform");
        cmd->add_option("--config", config_file, "JSON model config; explicit flags override it");
    }

    // JSON file (when given) supplies the base; flags the user actually
    // passed override it. The effective config is what campaigns echo back.
    ModelConfig resolve() const {
        ModelConfig config;
        const bool from_file = !config_file.empty();
        if (from_file) {
            std::ifstream in(config_file);
            if (!in) throw CLI::ValidationError("--config", "cannot open " + config_file);
            nlohmann::json j;
            in >> j;
            config = config_from_json(j);
        }
        if (!from_file || opt_n->count()) config.n = n;
        if (!from_file || opt_gamma1->count()) config.gamma1 = gamma1;
        if (!from_file || opt_gamma2->count()) config.gamma2 = gamma2;
        if (!from_file || opt_alpha->count()) config.alpha = alpha;
        if (!from_file || opt_regime->count()) config.regime = parse_regime(regime);
        if (!from_file || opt_sigma->count()) config.sigma = sigma;
        if (!from_file || opt_noise->count()) config.noise = parse_noise(noise);
        config.validate();
        return config;
    }
};

int cmd_simulate(const ModelFlags& flags, std::uint64_t seed, const std::string& out) {
    const ModelConfig config = flags.resolve();
    const SamplePath path = simulate(config, seed);
    write_path_csv(path, out);
    std::cout << "wrote " << out << " (n=" << config.n << ")\n";
    return 0;
}

int cmd_estimate(const ModelFlags& flags, const std::string& in_file, std::uint64_t seed,
                 bool kahan, const std::string& out) {
    const SummationMode mode = kahan ? SummationMode::Compensated : SummationMode::Plain;
    SamplePath path;
    if (!in_file.empty()) {
        path = path_from_data(read_path_csv(in_file));
    } else {
        path = simulate(flags.resolve(), seed);
    }
    const auto theta = estimate_theta(path, mode);
    if (!theta) {
        std::cerr << "degenerate path: zero denominator in the least squares estimator\n";
        return 1;
    }
    EstimateResult est = *theta;
    if (const auto rho = estimate_rho(path, est.theta_hat, mode)) est.rho_hat = *rho;
    const nlohmann::json j = estimate_to_json(est);
    if (!out.empty()) write_text_file(out, j.dump(2) + "\n");
    std::cout << j.dump(2) << '\n';
    return 0;
}

int cmd_verify(int configs, std::uint64_t seed, int n_min, int n_max, bool kahan,
               const std::string& out) {
    const SummationMode mode = kahan ? SummationMode::Compensated : SummationMode::Plain;
    std::string csv = "identity,config_index,seed,lhs,rhs,rel_residual,skipped,flags\n";
    SplitMix64 rng(seed);
    int unflagged_failures = 0;
    for (int i = 0; i < configs; ++i) {
        const ModelConfig config = random_identity_config(rng, n_min, n_max);
        const std::uint64_t path_seed = rng.next();
        const SamplePath path = simulate(config, path_seed);
        for (const auto& report : verify_all(path, mode)) {
            char row[256];
            std::string flags_joined;
            for (const auto& flag : report.condition_flags) {
                if (!flags_joined.empty()) flags_joined += ';';
                flags_joined += flag;
            }
            std::snprintf(row, sizeof row, "%s,%d,%llu,%.17g,%.17g,%.3e,%d,",
                          identity_name(report.id), i,
                          static_cast<unsigned long long>(path_seed), report.lhs, report.rhs,
                          report.rel_residual, report.skipped ? 1 : 0);
            csv += row;
            csv += flags_joined;
            csv += '\n';
            if (!report.passed() && !report.excused()) {
                ++unflagged_failures;
                std::cerr << "FAIL " << identity_name(report.id) << " at config " << i
                          << ": residual " << report.rel_residual << '\n';
            }
        }
    }
    if (!out.empty()) write_text_file(out, csv);
    std::cout << "verified " << configs << " configurations; unflagged failures: "
              << unflagged_failures << '\n';
    return unflagged_failures == 0 ? 0 : 1;
}

int cmd_campaign(const ModelFlags& flags, const std::string& branch, int reps,
                 std::uint64_t seed, int workers, bool kahan, const std::string& out,
                 const std::string& functionals_out, bool with_quantiles) {
    CampaignConfig cfg;
    cfg.model = flags.resolve();
    cfg.branch = parse_branch(branch);
    cfg.replications = reps;
    cfg.base_seed = seed;
    cfg.workers = workers;
    cfg.summation = kahan ? SummationMode::Compensated : SummationMode::Plain;
    cfg.output_path = out; // run_campaign writes <out>.csv itself

    const CampaignResult result = run_campaign(cfg);

    const std::vector<double> probs =
        with_quantiles ? std::vector<double>{0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99}
                       : std::vector<double>{};
    const nlohmann::json summary = campaign_summary_json(cfg, result, probs);
    if (!out.empty()) write_text_file(out + ".json", summary.dump(2) + "\n");
    if (!functionals_out.empty()) write_functionals_csv(result, functionals_out);
    std::cout << summary.dump(2) << '\n';
    if (result.nonfinite_cap_exceeded) {
        std::cerr << "non-finite replication count exceeds the 0.5% cap\n";
        return 1;
    }
    return 0;
}

int cmd_suite(const std::string& id, std::uint64_t seed, int workers, bool list,
              bool as_json) {
    if (list) {
        for (const auto& name : registered_suites()) std::cout << name << '\n';
        return 0;
    }
    const SuiteReport report = run_property_suite(id, seed, workers);
    if (as_json) {
        const nlohmann::json j{{"suite_id", report.suite_id},
                               {"passed", report.passed},
                               {"lines", report.lines}};
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& line : report.lines) std::cout << line << '\n';
        std::cout << report.suite_id << ": " << (report.passed ? "PASS" : "FAIL") << '\n';
    }
    return report.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mildly-explosive AR(1)-driven-AR(1) simulation and verification toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int reps = 1000;
    int workers = 1;
    bool kahan = false;
    std::string out;
    std::string branch = "T1_1";

    auto* sim = app.add_subcommand("simulate", "simulate one path and write it as CSV");
    ModelFlags sim_flags;
    sim_flags.attach(sim);
    sim->add_option("--seed", seed, "RNG seed");
    sim->add_option("--out", out, "output CSV file")->required();

    auto* est = app.add_subcommand("estimate", "least squares estimates for a path");
    ModelFlags est_flags;
    est_flags.attach(est);
    std::string est_in;
    est->add_option("--in", est_in, "path CSV produced by `simulate` (otherwise simulate fresh)");
    est->add_option("--seed", seed, "RNG seed when simulating");
    est->add_flag("--kahan", kahan, "compensated summation");
    est->add_option("--out", out, "also write the JSON result here");

    auto* ver = app.add_subcommand("verify", "identity catalog over random configurations");
    int ver_configs = 1000;
    int n_min = 8, n_max = 400;
    ver->add_option("--configs", ver_configs, "number of random configurations");
    ver->add_option("--seed", seed, "sweep seed");
    ver->add_option("--n-min", n_min, "minimum horizon");
    ver->add_option("--n-max", n_max, "maximum horizon");
    ver->add_flag("--kahan", kahan, "compensated summation");
    ver->add_option("--out", out, "CSV of per-(identity, seed) residuals");

    std::string functionals_out;

    auto* mc = app.add_subcommand("mc", "Monte Carlo campaign for one theorem branch");
    ModelFlags mc_flags;
    mc_flags.attach(mc);
    mc->add_option("--branch", branch, "T1_1, T1_2, T1_3, T2_1, T2_2");
    mc->add_option("--reps", reps, "replications");
    mc->add_option("--seed", seed, "base seed");
    mc->add_option("--workers", workers, "worker threads");
    mc->add_flag("--kahan", kahan, "compensated summation");
    mc->add_option("--out", out, "output prefix (<out>.csv, <out>.json)");
    mc->add_option("--functionals-out", functionals_out,
                   "also write one noise-functional row per replication");

    auto* lim = app.add_subcommand("limit-check", "campaign plus quantile table and KS fit");
    ModelFlags lim_flags;
    lim_flags.attach(lim);
    lim->add_option("--branch", branch, "T1_1, T1_2, T1_3, T2_1, T2_2");
    lim->add_option("--reps", reps, "replications");
    lim->add_option("--seed", seed, "base seed");
    lim->add_option("--workers", workers, "worker threads");
    lim->add_flag("--kahan", kahan, "compensated summation");
    lim->add_option("--out", out, "output prefix (<out>.csv, <out>.json)");
    lim->add_option("--functionals-out", functionals_out,
                    "also write one noise-functional row per replication");

    auto* suite = app.add_subcommand("suite", "run a registered property suite");
    std::string suite_id;
    bool suite_list = false;
    bool suite_json = false;
    suite->add_option("id", suite_id, "suite id (see --list)");
    suite->add_flag("--list", suite_list, "list registered suites");
    suite->add_flag("--json", suite_json, "emit the report as JSON");
    suite->add_option("--seed", seed, "base seed");
    suite->add_option("--workers", workers, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_flags, seed, out);
        if (est->parsed()) return cmd_estimate(est_flags, est_in, seed, kahan, out);
        if (ver->parsed()) return cmd_verify(ver_configs, seed, n_min, n_max, kahan, out);
        if (mc->parsed())
            return cmd_campaign(mc_flags, branch, reps, seed, workers, kahan, out,
                                functionals_out, false);
        if (lim->parsed())
            return cmd_campaign(lim_flags, branch, reps, seed, workers, kahan, out,
                                functionals_out, true);
        if (suite->parsed()) {
            if (!suite_list && suite_id.empty())
                throw CLI::ValidationError("suite", "provide a suite id or --list");
            return cmd_suite(suite_id, seed, workers, suite_list, suite_json);
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
