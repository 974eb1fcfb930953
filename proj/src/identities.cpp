#include "mildex/identities.hpp"

#include <algorithm>
#include <cmath>

#include "mildex/functionals.hpp"

namespace mildex {

namespace {

double rel_residual(double lhs, double rhs) {
    return std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
}

// fold a sub-identity into the report, keeping the worst residual visible
void fold(IdentityReport& report, double lhs, double rhs) {
    const double res = rel_residual(lhs, rhs);
    if (res >= report.rel_residual) {
        report.rel_residual = res;
        report.lhs = lhs;
        report.rhs = rhs;
    }
}

bool near_degenerate(const EffectiveParams& p) {
    return std::abs(p.theta_n - p.rho_n) <
           kRootGapThreshold * (std::abs(p.theta_n) + std::abs(p.rho_n));
}

void flag_overflow_risk(IdentityReport& report, const EffectiveParams& p, int n) {
    if (2.0 * n * std::log(std::abs(p.theta_n)) > std::log(1e300) ||
        2.0 * n * std::log(std::abs(p.rho_n)) > std::log(1e300))
        report.condition_flags.push_back("overflow_risk");
}

struct Evaluation {
    EffectiveParams p;
    Aggregates agg;
    FunctionalSet fs;
    double xn, en, xn1; // X_n, eps_n, X_{n-1}
    int n;
};

Evaluation gather(const SamplePath& path, SummationMode mode) {
    Evaluation d;
    d.p = effective_params(path.config);
    d.agg = compute_aggregates(path, mode);
    d.fs = compute_functionals(path, mode);
    d.n = path.n();
    d.xn = path.x[d.n];
    d.en = path.eps[d.n];
    d.xn1 = path.x[d.n - 1];
    return d;
}

} // namespace

const char* identity_name(IdentityId id) {
    switch (id) {
        case IdentityId::SDecomp: return "S_decomp";
        case IdentityId::PDecomp: return "P_decomp";
        case IdentityId::ExPn: return "ex_Pn";
        case IdentityId::ExSn: return "ex_Sn";
        case IdentityId::StepXn1: return "step_Xn1";
        case IdentityId::NRelation: return "N_relation";
        case IdentityId::SignFlip: return "signflip";
        case IdentityId::ClosedFormX: return "closed_form_X";
        case IdentityId::Lemma2Distinct: return "lemma2_distinct";
        case IdentityId::Lemma2Equal: return "lemma2_equal";
    }
    return "unknown";
}

double identity_threshold(IdentityId id) {
    switch (id) {
        case IdentityId::SDecomp:
        case IdentityId::PDecomp:
        case IdentityId::ExPn:
        case IdentityId::ExSn: return 1e-7;
        case IdentityId::StepXn1:
        case IdentityId::NRelation: return 1e-10;
        case IdentityId::SignFlip: return 1e-14;
        case IdentityId::ClosedFormX: return 1e-8;
        case IdentityId::Lemma2Distinct:
        case IdentityId::Lemma2Equal: return 1e-8;
    }
    return 1e-7;
}

const std::vector<IdentityId>& identity_catalog() {
    static const std::vector<IdentityId> catalog = {
        IdentityId::SDecomp,        IdentityId::PDecomp,   IdentityId::ExPn,
        IdentityId::ExSn,           IdentityId::StepXn1,   IdentityId::NRelation,
        IdentityId::SignFlip,       IdentityId::ClosedFormX,
        IdentityId::Lemma2Distinct, IdentityId::Lemma2Equal,
    };
    return catalog;
}

bool IdentityReport::has_flag(const std::string& flag) const {
    return std::find(condition_flags.begin(), condition_flags.end(), flag) !=
           condition_flags.end();
}

bool IdentityReport::excused() const {
    return has_flag("near_degenerate_roots") || has_flag("overflow_risk") ||
           has_flag("zero_denominator") || has_flag("nonfinite_result");
}

namespace {

IdentityReport check_s_decomp(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::SDecomp;
    const auto d = gather(path, mode);
    const double t = d.p.theta_n, r = d.p.rho_n;
    const double tr = t * r;
    flag_overflow_risk(report, d.p, d.n);

    const double remainder =
        2.0 * tr / ((1.0 - tr) * (t * t - 1.0)) * d.xn * d.en -
        r * r * (1.0 + tr) / ((1.0 - tr) * (1.0 - t * t) * (1.0 - r * r)) * d.en * d.en +
        (1.0 + tr) / ((1.0 - tr) * (1.0 - t * t) * (1.0 - r * r)) * d.agg.L_n +
        2.0 * t / ((1.0 - tr) * (1.0 - t * t)) * d.agg.M_n +
        2.0 * r * (1.0 + tr) / ((1.0 - tr) * (1.0 - t * t) * (1.0 - r * r)) * d.agg.EV_n;

    fold(report, d.agg.S_n_minus_1, d.xn * d.xn / (t * t - 1.0) + remainder);
    return report;
}

IdentityReport check_p_decomp(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::PDecomp;
    const auto d = gather(path, mode);
    if (near_degenerate(d.p)) {
        report.skipped = true;
        report.condition_flags.push_back("near_degenerate_roots");
        return report;
    }
    const double t = d.p.theta_n, r = d.p.rho_n, k = d.p.k_n;
    const double tr = t * r;
    flag_overflow_risk(report, d.p, d.n);

    const double tn = signed_pow(t, d.n);
    const double rn = signed_pow(r, d.n);
    const double main_terms =
        tr / ((tr - 1.0) * (t - r)) * k * tn * rn * d.fs.xi_theta * d.fs.xi_rho +
        r * r / ((t - r) * (1.0 - r * r)) * k * rn * rn * d.fs.xi_rho * d.fs.xi_rho;
    const double remainder =
        d.agg.M_n / (1.0 - tr) + r * d.agg.L_n / ((1.0 - tr) * (1.0 - r * r)) +
        2.0 * r * r * d.agg.EV_n / ((1.0 - tr) * (1.0 - r * r));

    // Stated as P = theta S + (decomposition): the centered difference itself
    // can sit below one ulp of P, so the additive form is what is checkable.
    fold(report, d.agg.P_n, t * d.agg.S_n_minus_1 + main_terms + remainder);
    return report;
}

IdentityReport check_ex_pn(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::ExPn;
    const auto d = gather(path, mode);
    const double t = d.p.theta_n, r = d.p.rho_n;
    const double tr = t * r;
    fold(report, d.agg.P_n,
         ((t + r) * d.agg.S_n_minus_1 + d.agg.M_n + tr * d.xn * d.xn1) / (1.0 + tr));
    return report;
}

IdentityReport check_ex_sn(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::ExSn;
    const auto d = gather(path, mode);
    const double t = d.p.theta_n, r = d.p.rho_n;
    const double tr = t * r;
    const double sum = t + r;
    const double p_n_minus_1 = d.agg.P_n - d.xn * d.xn1;
    const double lhs = (1.0 - sum * sum - tr * tr) * d.agg.S_n_minus_1;
    const double rhs = -d.xn * d.xn - tr * tr * d.xn1 * d.xn1 + d.agg.L_n -
                       2.0 * tr * sum * p_n_minus_1 + 2.0 * sum * d.agg.M_n -
                       2.0 * tr * d.agg.N_n;
    fold(report, lhs, rhs);
    return report;
}

IdentityReport check_step(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::StepXn1;
    const auto d = gather(path, mode);
    const double t = d.p.theta_n;

    const double square_rhs = (d.xn * d.xn + d.en * d.en - 2.0 * d.xn * d.en) / (t * t);
    fold(report, d.xn1 * d.xn1, square_rhs);
    fold(report, d.xn1 * d.xn, (d.xn * d.xn - d.xn * d.en) / t);

    // The printed variant divides the squared step by theta instead of
    // theta^2; record which exponent the data supports.
    const double printed_rhs = (d.xn * d.xn + d.en * d.en - 2.0 * d.xn * d.en) / t;
    const double printed_res = rel_residual(d.xn1 * d.xn1, printed_rhs);
    report.condition_flags.push_back(
        printed_res < identity_threshold(IdentityId::StepXn1)
            ? "printed_exponent_variant_holds"
            : "printed_exponent_variant_fails");
    return report;
}

IdentityReport check_n_relation(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::NRelation;
    const auto d = gather(path, mode);
    fold(report, d.agg.N_n, (d.agg.M_n - d.agg.EV_n) / d.p.theta_n);
    return report;
}

IdentityReport check_signflip(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::SignFlip;
    const auto original = estimate_theta(path, mode);
    const auto flipped = estimate_theta(sign_flip(path), mode);
    if (!original || !flipped) {
        report.skipped = true;
        report.condition_flags.push_back("zero_denominator");
        return report;
    }
    fold(report, flipped->theta_hat, -original->theta_hat);
    return report;
}

IdentityReport check_closed_form(const SamplePath& path, SummationMode mode) {
    (void)mode; // reconstruction is recursion-order by definition
    IdentityReport report;
    report.id = IdentityId::ClosedFormX;
    const auto p = effective_params(path.config);
    if (!path.config.equal_roots() && near_degenerate(p)) {
        report.skipped = true;
        report.condition_flags.push_back("near_degenerate_roots");
        return report;
    }
    flag_overflow_risk(report, p, path.n());
    report.condition_flags.push_back(path.config.equal_roots() ? "equal_roots_branch"
                                                               : "distinct_roots_branch");
    const auto reconstructed = closed_form_path(path);
    for (int k = 1; k <= path.n(); ++k) {
        const double lhs = reconstructed[k];
        const double rhs = path.x[k];
        const double res = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
        if (res >= report.rel_residual) {
            report.rel_residual = res;
            report.lhs = lhs;
            report.rhs = rhs;
        }
    }
    return report;
}

IdentityReport check_lemma2_distinct(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::Lemma2Distinct;
    const auto d = gather(path, mode);
    if (path.config.equal_roots() || near_degenerate(d.p)) {
        report.skipped = true;
        report.condition_flags.push_back(path.config.equal_roots()
                                             ? "equal_roots"
                                             : "near_degenerate_roots");
        return report;
    }
    const double t = d.p.theta_n, r = d.p.rho_n, k = d.p.k_n;
    const double gap = t - r;
    const double tn = signed_pow(t, d.n);
    const double rn = signed_pow(r, d.n);
    const double xi_t = d.fs.xi_theta, xi_r = d.fs.xi_rho;
    flag_overflow_risk(report, d.p, d.n);

    fold(report, d.xn * d.xn,
         t * t / (gap * gap) * tn * tn * k * xi_t * xi_t +
             r * r / (gap * gap) * rn * rn * k * xi_r * xi_r -
             2.0 * t * r / (gap * gap) * tn * rn * k * xi_t * xi_r);
    fold(report, d.xn * d.en,
         t / gap * tn * rn * k * xi_t * xi_r - r / gap * rn * rn * k * xi_r * xi_r);
    fold(report, d.en * d.en, k * rn * rn * xi_r * xi_r);
    return report;
}

IdentityReport check_lemma2_equal(const SamplePath& path, SummationMode mode) {
    IdentityReport report;
    report.id = IdentityId::Lemma2Equal;
    if (!path.config.equal_roots()) {
        report.skipped = true;
        report.condition_flags.push_back("distinct_roots");
        return report;
    }
    const auto d = gather(path, mode);
    const double t = d.p.theta_n, k = d.p.k_n;
    const double tn = signed_pow(t, d.n);
    const double nd = static_cast<double>(d.n);
    flag_overflow_risk(report, d.p, d.n);

    fold(report, d.xn * d.xn, nd * nd * k * tn * tn * d.fs.phi_theta * d.fs.phi_theta);
    fold(report, d.xn * d.en, nd * k * tn * tn * d.fs.phi_theta * d.fs.xi_theta);
    fold(report, d.en * d.en, k * tn * tn * d.fs.xi_theta * d.fs.xi_theta);
    return report;
}

} // namespace

IdentityReport verify_identity(IdentityId id, const SamplePath& path, SummationMode mode) {
    IdentityReport report = [&] {
        switch (id) {
            case IdentityId::SDecomp: return check_s_decomp(path, mode);
            case IdentityId::PDecomp: return check_p_decomp(path, mode);
            case IdentityId::ExPn: return check_ex_pn(path, mode);
            case IdentityId::ExSn: return check_ex_sn(path, mode);
            case IdentityId::StepXn1: return check_step(path, mode);
            case IdentityId::NRelation: return check_n_relation(path, mode);
            case IdentityId::SignFlip: return check_signflip(path, mode);
            case IdentityId::ClosedFormX: return check_closed_form(path, mode);
            case IdentityId::Lemma2Distinct: return check_lemma2_distinct(path, mode);
            case IdentityId::Lemma2Equal: return check_lemma2_equal(path, mode);
        }
        throw std::invalid_argument("verify_identity: unknown identity id");
    }();
    // a non-finite residual means some product left double range: an extreme
    // dynamic-range condition, never a silent failure
    if (!report.skipped && !std::isfinite(report.rel_residual) &&
        !report.has_flag("overflow_risk"))
        report.condition_flags.push_back("nonfinite_result");
    return report;
}

std::vector<IdentityReport> verify_all(const SamplePath& path, SummationMode mode) {
    std::vector<IdentityReport> reports;
    reports.reserve(identity_catalog().size());
    for (IdentityId id : identity_catalog()) reports.push_back(verify_identity(id, path, mode));
    return reports;
}

IdentityReport verify_S_decomposition(const SamplePath& path, SummationMode mode) {
    return verify_identity(IdentityId::SDecomp, path, mode);
}
IdentityReport verify_P_decomposition(const SamplePath& path, SummationMode mode) {
    return verify_identity(IdentityId::PDecomp, path, mode);
}
IdentityReport verify_step_identities(const SamplePath& path, SummationMode mode) {
    // both one-step endpoint identities plus the N relation, worst residual
    auto report = verify_identity(IdentityId::StepXn1, path, mode);
    const auto n_rel = verify_identity(IdentityId::NRelation, path, mode);
    if (n_rel.rel_residual > report.rel_residual) {
        report.lhs = n_rel.lhs;
        report.rhs = n_rel.rhs;
        report.rel_residual = n_rel.rel_residual;
    }
    return report;
}
IdentityReport verify_signflip_estimator(const SamplePath& path, SummationMode mode) {
    return verify_identity(IdentityId::SignFlip, path, mode);
}

ModelConfig random_identity_config(SplitMix64& rng, int n_min, int n_max) {
    ModelConfig config;
    config.n = n_min + static_cast<int>(rng.next() % static_cast<std::uint64_t>(n_max - n_min + 1));
    config.alpha = 0.2 + 0.6 * rng.next_unit();
    config.sigma = 0.5 + 1.5 * rng.next_unit();
    config.gamma1 = 0.1 + 2.9 * rng.next_unit();
    switch (rng.next() % 4) {
        case 0: config.regime = Regime::PP; break;
        case 1: config.regime = Regime::PM; break;
        case 2: config.regime = Regime::MM; break;
        default: config.regime = Regime::MP; break;
    }
    switch (rng.next() % 3) {
        case 0: config.noise = NoiseKind::Gaussian; break;
        case 1: config.noise = NoiseKind::Rademacher; break;
        default: config.noise = NoiseKind::Uniform; break;
    }
    if (config.same_sign() && rng.next_unit() < 0.2) {
        config.gamma2 = config.gamma1; // exercise the equal-roots branch
    } else {
        do {
            config.gamma2 = 0.1 + 2.9 * rng.next_unit();
        } while (std::abs(config.gamma2 - config.gamma1) < 0.05);
    }
    return config;
}

} // namespace mildex
