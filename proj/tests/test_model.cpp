#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "mildex/identities.hpp"
#include "mildex/io.hpp"
#include "mildex/model.hpp"
#include "test_util.hpp"

using namespace mildex;

TEST_CASE("effective parameters") {
    ModelConfig config;
    config.gamma1 = 1.0;
    config.gamma2 = 2.0;
    config.alpha = 1.0 / 3.0;
    config.n = 8;

    SUBCASE("power-form k_n and PP signs") {
        const auto p = effective_params(config);
        CHECK(p.k_n == doctest::Approx(2.0).epsilon(1e-15));
        CHECK(p.theta_n == doctest::Approx(1.5).epsilon(1e-15));
        CHECK(p.rho_n == doctest::Approx(2.0).epsilon(1e-15));
    }
    SUBCASE("PM flips rho only") {
        config.regime = Regime::PM;
        const auto p = effective_params(config);
        CHECK(p.theta_n == doctest::Approx(1.5));
        CHECK(p.rho_n == doctest::Approx(-2.0));
    }
    SUBCASE("MM and MP") {
        config.regime = Regime::MM;
        CHECK(effective_params(config).theta_n < -1.0);
        CHECK(effective_params(config).rho_n < -1.0);
        config.regime = Regime::MP;
        CHECK(effective_params(config).theta_n < -1.0);
        CHECK(effective_params(config).rho_n > 1.0);
    }
    SUBCASE("reference design horizon") {
        config.n = 400;
        const auto p = effective_params(config);
        CHECK(p.k_n == doctest::Approx(7.368063).epsilon(1e-6));
        CHECK(p.theta_n == doctest::Approx(1.13572).epsilon(1e-5));
    }
}

TEST_CASE("config validation") {
    ModelConfig config;
    config.validate();

    auto expect_reject = [](ModelConfig c) {
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    };
    ModelConfig c = config;
    c.gamma1 = 0.0;
    expect_reject(c);
    c = config;
    c.gamma2 = -1.0;
    expect_reject(c);
    c = config;
    c.alpha = 0.0;
    expect_reject(c);
    c = config;
    c.alpha = 1.0;
    expect_reject(c);
    c = config;
    c.n = 1;
    expect_reject(c);
    c = config;
    c.n = ModelConfig::max_horizon + 1;
    expect_reject(c);
    c = config;
    c.sigma = 0.0;
    expect_reject(c);
}

TEST_CASE("simulation recursion") {
    SUBCASE("zero noise gives the zero path") {
        ModelConfig config = testutil::config_for(1.1, 1.05, 5);
        const auto path = path_from_noise(config, {0, 0, 0, 0, 0});
        for (int k = 0; k <= 5; ++k) {
            CHECK(path.eps[k] == 0.0);
            CHECK(path.x[k] == 0.0);
        }
    }
    SUBCASE("three-step hand recursion") {
        const auto path = testutil::hand_path();
        CHECK(path.eps[0] == 0.0);
        CHECK(path.x[0] == 0.0);
        CHECK(path.eps[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(path.eps[2] == doctest::Approx(0.05).epsilon(1e-12));
        CHECK(path.eps[3] == doctest::Approx(2.0525).epsilon(1e-12));
        CHECK(path.x[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(path.x[2] == doctest::Approx(1.15).epsilon(1e-12));
        CHECK(path.x[3] == doctest::Approx(3.3175).epsilon(1e-12));
    }
    SUBCASE("determinism and seed sensitivity") {
        ModelConfig config;
        config.n = 50;
        const auto a = simulate(config, 7);
        const auto b = simulate(config, 7);
        const auto c = simulate(config, 8);
        CHECK(a.v == b.v);
        CHECK(a.x == b.x);
        CHECK(a.eps == b.eps);
        CHECK(a.v != c.v);
    }
    SUBCASE("recursion invariants hold on simulated paths") {
        ModelConfig config;
        config.n = 200;
        config.regime = Regime::PM;
        const auto path = simulate(config, 99);
        const auto p = effective_params(config);
        for (int k = 1; k <= config.n; ++k) {
            CHECK(path.eps[k] ==
                  doctest::Approx(p.rho_n * path.eps[k - 1] + path.noise_at(k)).epsilon(1e-12));
            CHECK(path.x[k] ==
                  doctest::Approx(p.theta_n * path.x[k - 1] + path.eps[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("noise moments within five standard errors") {
    const int draws = 100000;
    const double sigma = 1.7;
    const double var = sigma * sigma;
    for (NoiseKind kind : {NoiseKind::Gaussian, NoiseKind::Rademacher, NoiseKind::Uniform}) {
        NoiseSampler sampler(kind, sigma, 99);
        double mean = 0.0;
        std::vector<double> values(draws);
        for (auto& v : values) {
            v = sampler.next();
            mean += v;
        }
        mean /= draws;
        double m2 = 0.0;
        for (double v : values) m2 += (v - mean) * (v - mean);
        m2 /= (draws - 1);
        CHECK(std::abs(mean) < 5.0 * sigma / std::sqrt(static_cast<double>(draws)));
        CHECK(std::abs(m2 - var) < 5.0 * var * std::sqrt(2.0 / draws));
        if (kind == NoiseKind::Rademacher)
            for (double v : values) CHECK(std::abs(v) == doctest::Approx(sigma));
    }
}

TEST_CASE("closed-form path reconstruction") {
    SUBCASE("equal-roots branch, single impulse") {
        ModelConfig config = testutil::config_for(1.1, 1.1, 3);
        REQUIRE(config.equal_roots());
        const auto path = path_from_noise(config, {1.0, 0.0, 0.0});
        const auto cf = closed_form_x(path, 2);
        CHECK(cf.equal_roots_branch);
        // recursion oracle: eps_2 = 1.1, x_2 = 1.1 + 1.1 = 2.2
        CHECK(path.x[2] == doctest::Approx(2.2).epsilon(1e-14));
        CHECK(cf.value == doctest::Approx(path.x[2]).epsilon(1e-12));
    }
    SUBCASE("distinct-roots branch matches the hand example") {
        const auto path = testutil::hand_path();
        for (int k = 1; k <= 3; ++k) {
            const auto cf = closed_form_x(path, k);
            CHECK_FALSE(cf.equal_roots_branch);
            CHECK(cf.value == doctest::Approx(path.x[k]).epsilon(1e-12));
        }
    }
    SUBCASE("first step equals the first noise draw in both branches") {
        const auto distinct = path_from_noise(testutil::config_for(1.2, 1.05, 4), {0.7, 1, 1, 1});
        CHECK(closed_form_x(distinct, 1).value == doctest::Approx(0.7).epsilon(1e-14));
        const auto equal = path_from_noise(testutil::config_for(1.2, 1.2, 4), {0.7, 1, 1, 1});
        CHECK(closed_form_x(equal, 1).value == doctest::Approx(0.7).epsilon(1e-14));
    }
    SUBCASE("near-degenerate distinct roots are refused") {
        ModelConfig config = testutil::config_for(1.1, 1.1 + 1e-9, 5);
        const auto path = path_from_noise(config, {1, 1, 1, 1, 1});
        CHECK_THROWS_AS(closed_form_x(path, 3), std::domain_error);
        CHECK_THROWS_AS(closed_form_path(path), std::domain_error);
    }
    SUBCASE("recursion agreement on random configurations") {
        SplitMix64 rng(314);
        for (int rep = 0; rep < 40; ++rep) {
            const ModelConfig config = random_identity_config(rng, 8, 300);
            const auto path = simulate(config, rng.next());
            const auto cf = closed_form_path(path);
            for (int k = 1; k <= config.n; ++k)
                CHECK(std::abs(cf[k] - path.x[k]) / (1.0 + std::abs(path.x[k])) < 1e-8);
        }
    }
}

TEST_CASE("alternating-sign map") {
    SUBCASE("exact relation and involution") {
        ModelConfig config;
        config.n = 101;
        config.regime = Regime::PP;
        const auto path = simulate(config, 5);
        const auto flipped = sign_flip(path);
        CHECK(flipped.config.regime == Regime::MM);
        for (int k = 1; k <= path.n(); ++k) {
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(flipped.x[k] == sign * path.x[k]);
            CHECK(flipped.eps[k] == sign * path.eps[k]);
            CHECK(flipped.noise_at(k) == sign * path.noise_at(k));
        }
        const auto twice = sign_flip(flipped);
        CHECK(twice.x == path.x);
        CHECK(twice.eps == path.eps);
        CHECK(twice.v == path.v);
        CHECK(twice.config.regime == Regime::PP);
    }
    SUBCASE("regime mapping covers all four") {
        ModelConfig config;
        config.n = 4;
        const auto base = path_from_noise(config, {1, 1, 1, 1});
        CHECK(sign_flip(base).config.regime == Regime::MM);
        config.regime = Regime::PM;
        CHECK(sign_flip(path_from_noise(config, {1, 1, 1, 1})).config.regime == Regime::MP);
    }
    SUBCASE("zero path maps to the zero path") {
        ModelConfig config;
        config.n = 5;
        const auto flipped = sign_flip(path_from_noise(config, {0, 0, 0, 0, 0}));
        for (int k = 0; k <= 5; ++k) {
            CHECK(flipped.x[k] == 0.0);
            CHECK(flipped.eps[k] == 0.0);
        }
    }
    SUBCASE("flipped path satisfies its own recursion") {
        ModelConfig config;
        config.n = 60;
        const auto flipped = sign_flip(simulate(config, 17));
        const auto p = effective_params(flipped.config);
        for (int k = 1; k <= flipped.n(); ++k) {
            CHECK(flipped.eps[k] ==
                  doctest::Approx(p.rho_n * flipped.eps[k - 1] + flipped.noise_at(k))
                      .epsilon(1e-12));
            CHECK(flipped.x[k] ==
                  doctest::Approx(p.theta_n * flipped.x[k - 1] + flipped.eps[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("explosive growth is tame under the explosive normalization") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        double lo = 1e300, hi = 0.0;
        for (int n : {100, 200, 400}) {
            ModelConfig config;
            config.gamma1 = 1.0;
            config.gamma2 = 0.5;
            config.n = n;
            const auto p = effective_params(config);
            const auto path = simulate(config, seed);
            const double ratio = std::abs(path.x[n]) / std::pow(std::abs(p.theta_n), n);
            CHECK(ratio > 0.0);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK(hi / lo < 20.0);
    }
}

TEST_CASE("model config JSON round trip") {
    ModelConfig config;
    config.gamma1 = 0.75;
    config.gamma2 = 1.5;
    config.alpha = 0.4;
    config.n = 123;
    config.regime = Regime::MP;
    config.sigma = 2.0;
    config.noise = NoiseKind::Rademacher;

    const auto j = config_to_json(config);
    const auto back = config_from_json(j);
    CHECK(back.gamma1 == config.gamma1);
    CHECK(back.gamma2 == config.gamma2);
    CHECK(back.alpha == config.alpha);
    CHECK(back.n == config.n);
    CHECK(back.regime == config.regime);
    CHECK(back.sigma == config.sigma);
    CHECK(back.noise == config.noise);

    SUBCASE("unknown keys rejected") {
        auto bad = j;
        bad["extra"] = 1;
        CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
    SUBCASE("missing keys rejected") {
        auto bad = j;
        bad.erase("sigma");
        CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
    SUBCASE("invalid values rejected") {
        auto bad = j;
        bad["gamma1"] = -2.0;
        CHECK_THROWS_AS(config_from_json(bad), std::invalid_argument);
    }
}
