#include <doctest.h>

#include <cmath>

#include "qbm/params.hpp"

using namespace qbm;

TEST_CASE("classify_regime boundaries and values") {
    auto r = classify_regime(1.0);
    CHECK(r.kind == RegimeKind::Periodic);
    CHECK(r.omega.real() == 0.0);
    CHECK(r.omega.imag() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    CHECK(r.omega_tilde == doctest::Approx(1.7320508075688772).epsilon(1e-15));

    r = classify_regime(2.0);
    CHECK(r.kind == RegimeKind::Aperiodic);
    CHECK(r.omega == std::complex<double>(0.0, 0.0));
    CHECK(r.omega_tilde == 0.0);

    r = classify_regime(4.0);
    CHECK(r.kind == RegimeKind::Overdamped);
    CHECK(r.omega.imag() == 0.0);
    CHECK(r.omega.real() == doctest::Approx(3.4641016151377544).epsilon(1e-15));

    CHECK_THROWS_AS(classify_regime(0.0), DomainError);
    CHECK_THROWS_AS(classify_regime(-1.0), DomainError);
}

TEST_CASE("classify_regime: aperiodic band and omega^2 identity") {
    CHECK(classify_regime(2.0 + 0.5e-9).kind == RegimeKind::Aperiodic);
    CHECK(classify_regime(2.0 - 0.5e-9).kind == RegimeKind::Aperiodic);
    CHECK(classify_regime(2.0 + 1e-8).kind == RegimeKind::Overdamped);
    CHECK(classify_regime(2.0 - 1e-8).kind == RegimeKind::Periodic);

    // (omega of Regime)^2 = gamma^2 - 4 to ulp-scale relative error
    for (double g : {0.1, 0.5, 1.0, 1.9, 2.5, 4.0, 50.0, 318.0}) {
        auto rr = classify_regime(g);
        std::complex<double> w2 = rr.omega * rr.omega;
        double expected = g * g - 4.0;
        CHECK(std::abs(w2.real() - expected) <= 4e-16 * std::abs(g * g + 4.0));
        CHECK(w2.imag() == 0.0);
    }
}

TEST_CASE("matsubara frequencies") {
    CHECK(matsubara(1, 1e7) == 1e7);
    CHECK(matsubara(3, 2.0) == 6.0);
    CHECK(matsubara(1000000, 1e7) == 1e13);  // no overflow in double
    CHECK_THROWS_AS(matsubara(0, 1.0), DomainError);
    CHECK_THROWS_AS(matsubara(-2, 1.0), DomainError);
}

TEST_CASE("ModelParams validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.gamma = 1.0;
    p.series.n_max = 5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.series.n_max = 100;
    p.quad.t_min = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
}

TEST_CASE("lambda roots multiply to one") {
    for (double g : {0.5, 1.0, 2.0, 4.0, 318.0}) {
        ModelParams p;
        p.gamma = g;
        auto prod = p.lambda1() * p.lambda2();
        CHECK(prod.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(prod.imag()) < 1e-12);
        auto sum = p.lambda1() + p.lambda2();
        CHECK(sum.real() == doctest::Approx(g).epsilon(1e-15));
    }
}

TEST_CASE("config parsing") {
    auto kv = parse_config_text("gamma = 2.5\n# comment\ntemperature=0.053  # trailing\nnu=1e7\n");
    CHECK(kv.at("gamma") == "2.5");
    CHECK(kv.at("temperature") == "0.053");
    ModelParams p;
    apply_config(p, kv);
    CHECK(p.gamma == 2.5);
    CHECK(p.temperature == 0.053);
    CHECK(p.nu == 1e7);
    CHECK(p.omega_d == 1e8);  // defaults to 10*nu when not given

    CHECK_THROWS_AS(parse_config_text("bogus_key=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("gamma\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("gamma=\n"), ConfigError);
    auto bad = parse_config_text("gamma=abc\n");
    CHECK_THROWS_AS(apply_config(p, bad), ConfigError);
    auto neg = parse_config_text("gamma=-1\n");
    CHECK_THROWS_AS(apply_config(p, neg), ConfigError);
}
