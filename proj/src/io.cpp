#include "mildex/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mildex {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string fmt_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

const char* regime_name(Regime regime) {
    switch (regime) {
        case Regime::PP: return "PP";
        case Regime::PM: return "PM";
        case Regime::MM: return "MM";
        case Regime::MP: return "MP";
    }
    return "PP";
}

Regime parse_regime(const std::string& name) {
    const std::string s = lower(name);
    if (s == "pp") return Regime::PP;
    if (s == "pm") return Regime::PM;
    if (s == "mm") return Regime::MM;
    if (s == "mp") return Regime::MP;
    throw std::invalid_argument("unknown regime: " + name);
}

const char* noise_name(NoiseKind noise) {
    switch (noise) {
        case NoiseKind::Gaussian: return "Gaussian";
        case NoiseKind::Rademacher: return "Rademacher";
        case NoiseKind::Uniform: return "Uniform";
    }
    return "Gaussian";
}

NoiseKind parse_noise(const std::string& name) {
    const std::string s = lower(name);
    if (s == "gaussian") return NoiseKind::Gaussian;
    if (s == "rademacher") return NoiseKind::Rademacher;
    if (s == "uniform") return NoiseKind::Uniform;
    throw std::invalid_argument("unknown noise kind: " + name);
}

const char* summation_name(SummationMode mode) {
    return mode == SummationMode::Plain ? "plain" : "compensated";
}

nlohmann::json config_to_json(const ModelConfig& config) {
    return nlohmann::json{
        {"gamma1", config.gamma1}, {"gamma2", config.gamma2},
        {"alpha", config.alpha},   {"n", config.n},
        {"regime", regime_name(config.regime)},
        {"sigma", config.sigma},   {"noise", noise_name(config.noise)},
    };
}

ModelConfig config_from_json(const nlohmann::json& j) {
    static const char* expected[] = {"gamma1", "gamma2", "alpha", "n",
                                     "regime", "sigma",  "noise"};
    if (!j.is_object()) throw std::invalid_argument("config JSON must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(std::begin(expected), std::end(expected),
                         [&](const char* e) { return key == e; }) == std::end(expected))
            throw std::invalid_argument("config JSON has unknown key: " + key);
    }
    for (const char* key : expected)
        if (!j.contains(key))
            throw std::invalid_argument(std::string("config JSON is missing key: ") + key);

    ModelConfig config;
    config.gamma1 = j.at("gamma1").get<double>();
    config.gamma2 = j.at("gamma2").get<double>();
    config.alpha = j.at("alpha").get<double>();
    config.n = j.at("n").get<int>();
    config.regime = parse_regime(j.at("regime").get<std::string>());
    config.sigma = j.at("sigma").get<double>();
    config.noise = parse_noise(j.at("noise").get<std::string>());
    config.validate();
    return config;
}

void write_path_csv(const SamplePath& path, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open for writing: " + filename);
    out << "k,v,eps,x\n";
    out << "0,0," << fmt_double(path.eps[0]) << ',' << fmt_double(path.x[0]) << '\n';
    for (int k = 1; k <= path.n(); ++k)
        out << k << ',' << fmt_double(path.noise_at(k)) << ',' << fmt_double(path.eps[k])
            << ',' << fmt_double(path.x[k]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + filename);
}

PathData read_path_csv(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open for reading: " + filename);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty path CSV: " + filename);

    PathData data;
    data.eps.push_back(0.0);
    data.x.push_back(0.0);
    bool first_row = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[4];
        for (double& val : vals) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("malformed path CSV row: " + line);
            val = std::stod(cell);
        }
        if (first_row && vals[0] == 0.0) {
            data.eps[0] = vals[2];
            data.x[0] = vals[3];
        } else {
            data.v.push_back(vals[1]);
            data.eps.push_back(vals[2]);
            data.x.push_back(vals[3]);
        }
        first_row = false;
    }
    if (data.v.empty()) throw std::runtime_error("path CSV has no observations: " + filename);
    return data;
}

SamplePath path_from_data(PathData data) {
    if (data.eps.size() != data.v.size() + 1 || data.x.size() != data.v.size() + 1)
        throw std::invalid_argument("path data lengths are inconsistent");
    SamplePath path;
    path.config.n = static_cast<int>(data.v.size());
    path.v = std::move(data.v);
    path.eps = std::move(data.eps);
    path.x = std::move(data.x);
    return path;
}

nlohmann::json estimate_to_json(const EstimateResult& est) {
    return nlohmann::json{
        {"theta_hat", est.theta_hat},
        {"rho_hat", est.rho_hat},
        {"P_n", est.agg.P_n},
        {"S_n_minus_1", est.agg.S_n_minus_1},
        {"S_n", est.agg.S_n},
        {"L_n", est.agg.L_n},
        {"M_n", est.agg.M_n},
        {"N_n", est.agg.N_n},
        {"EV_n", est.agg.EV_n},
    };
}

void write_campaign_csv(const CampaignResult& result, const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open for writing: " + filename);
    out << "rep_index,seed,theta_hat,rho_hat,statistic,finite_flag\n";
    for (const auto& rec : result.records)
        out << rec.rep_index << ',' << rec.seed << ',' << fmt_double(rec.theta_hat) << ','
            << fmt_double(rec.rho_hat) << ',' << fmt_double(rec.statistic) << ','
            << (rec.finite ? 1 : 0) << '\n';
    if (!out) throw std::runtime_error("write failed: " + filename);
}

void write_functionals_csv(const CampaignResult& result, const std::string& filename) {
    if (result.functionals.size() != result.records.size())
        throw std::invalid_argument("write_functionals_csv: functionals not collected");
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open for writing: " + filename);
    out << "rep_index,seed,xi_theta,eta_theta,xi_rho,eta_rho,phi_theta\n";
    for (std::size_t i = 0; i < result.records.size(); ++i) {
        const auto& rec = result.records[i];
        const auto& fs = result.functionals[i];
        out << rec.rep_index << ',' << rec.seed << ',' << fmt_double(fs.xi_theta) << ','
            << fmt_double(fs.eta_theta) << ',' << fmt_double(fs.xi_rho) << ','
            << fmt_double(fs.eta_rho) << ',' << fmt_double(fs.phi_theta) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + filename);
}

nlohmann::json campaign_summary_json(const CampaignConfig& cfg, const CampaignResult& result,
                                     const std::vector<double>& quantile_probs) {
    nlohmann::json j{
        {"config",
         {{"model", config_to_json(cfg.model)},
          {"branch", branch_name(cfg.branch)},
          {"replications", cfg.replications},
          {"base_seed", cfg.base_seed},
          {"workers", cfg.workers},
          {"summation", summation_name(cfg.summation)}}},
        {"location", result.ref.location},
        {"scale", result.ref.scale},
        {"ks", result.ks},
        {"n_nonfinite", result.nonfinite_count},
        {"nonfinite_cap_exceeded", result.nonfinite_cap_exceeded},
        {"wall_seconds", result.wall_seconds},
    };
    if (!quantile_probs.empty() && result.statistics.size() >= 2) {
        auto table = quantile_table(result.statistics, result.ref, quantile_probs);
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& q : table)
            rows.push_back({{"prob", q.prob}, {"empirical", q.empirical}, {"analytic", q.analytic}});
        j["quantiles"] = rows;
    }
    return j;
}

void write_text_file(const std::string& filename, const std::string& contents) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open for writing: " + filename);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + filename);
}

} // namespace mildex
