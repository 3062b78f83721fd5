#include <doctest.h>

#include <cmath>
#include <random>

#include "qbm/classical.hpp"
#include "qbm/numerics.hpp"

using namespace qbm;

namespace {

// defining integral evaluated by quadrature: 2 g T int_0^min(t,s) chiv'(t-x) chiv'(s-x) dx
double phi_phi_clas_bruteforce(double t, double s, const ClassicalParams& cp) {
    QuadControl q;
    q.abs_tol = 1e-14;
    q.rel_tol = 1e-12;
    q.max_depth = 50;
    auto f = [&](double x) {
        return eval_susceptibility(t - x, cp.gamma).dchi_v *
               eval_susceptibility(s - x, cp.gamma).dchi_v;
    };
    auto r = adaptive_quad(f, 0.0, std::min(t, s), q);
    return 2.0 * cp.gamma * cp.temperature * r.value;
}

}  // namespace

TEST_CASE("phi_phi_clas: frozen oracle points at gamma=4") {
    ClassicalParams cp{4.0, 1.0};
    CHECK(phi_phi_clas(1.0, 0.5, cp) == doctest::Approx(0.057908271158694440).epsilon(1e-12));
    CHECK(phi_phi_clas(2.0, 1.5, cp) == doctest::Approx(0.064512019903781816).epsilon(1e-12));
}

TEST_CASE("phi_phi_clas: matches the defining integral at random points") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> u(0.05, 3.0);
    for (double g : {4.0, 1.0, 2.0}) {
        ClassicalParams cp{g, 1.3};
        for (int i = 0; i < 5; ++i) {
            double t = u(rng), s = u(rng);
            double closed = phi_phi_clas(t, s, cp);
            double brute = phi_phi_clas_bruteforce(t, s, cp);
            CHECK(closed == doctest::Approx(brute).epsilon(1e-8).scale(1.0));
        }
    }
}

TEST_CASE("phi_phi_clas: boundary zeros and symmetry") {
    ClassicalParams cp{1.0, 2.0};
    CHECK(phi_phi_clas(0.0, 1.0, cp) == doctest::Approx(0.0).scale(1.0));
    CHECK(phi_phi_clas(1.0, 0.0, cp) == doctest::Approx(0.0).scale(1.0));
    for (double t : {0.3, 1.1, 2.7})
        for (double s : {0.6, 1.9})
            CHECK(phi_phi_clas(t, s, cp) == phi_phi_clas(s, t, cp));
    CHECK_THROWS_AS(phi_phi_clas(-1.0, 1.0, cp), DomainError);
}

TEST_CASE("d_clas: small-t limit, long-time limit, negativity windows") {
    ClassicalParams cp{4.0, 25.2};
    CHECK(d_clas(1e-9, cp) > 0.0);
    CHECK(d_clas(1e-9, cp) < 1e-6);  // ~ 2 T t as coth blows up
    // coth -> 1: D -> 4T/(gamma+omega), frozen 13.504639298528584
    double lim = 13.504639298528584;
    CHECK(d_clas(100.0, cp) == doctest::Approx(lim).epsilon(1e-10));

    ClassicalParams p1{1.0, 2.0};
    bool negative = false;
    for (double t = 0.05; t <= 10.0; t += 0.01) negative = negative || d_clas(t, p1) < 0.0;
    CHECK(negative);
    ClassicalParams p2{2.0, 2.0}, p4{4.0, 2.0};
    for (double t = 0.05; t <= 10.0; t += 0.05) {
        CHECK(d_clas(t, p2) >= 0.0);
        CHECK(d_clas(t, p4) >= 0.0);
    }
    CHECK_THROWS_AS(d_clas(0.0, cp), DomainError);
}

TEST_CASE("sigma_clas: boundaries, equipartition, oscillations") {
    ClassicalParams cp{3.0, 1.7};
    CHECK(sigma_clas(0.0, cp) == 0.0);
    CHECK(sigma_clas(80.0, cp) == doctest::Approx(cp.temperature).epsilon(1e-12));
    // frozen aperiodic value: T[1 - e^{-2}(1+1)^2] at gamma=2, T=1, t=1
    ClassicalParams ap{2.0, 1.0};
    CHECK(sigma_clas(1.0, ap) == doctest::Approx(0.45865886705354923).epsilon(1e-12));

    ClassicalParams per{0.5, 2.0};
    bool decreased = false;
    double prev = 0.0;
    for (double t = 0.01; t <= 10.0; t += 0.01) {
        double v = sigma_clas(t, per);
        decreased = decreased || v < prev - 1e-12;
        prev = v;
        CHECK(v >= 0.0);
    }
    CHECK(decreased);  // periodic regime oscillates

    // overdamped bound: 0 <= sigma <= T(1+eps), monotone approach
    ClassicalParams ov{4.0, 2.0};
    prev = -1.0;
    for (double t = 0.0; t <= 40.0; t += 0.1) {
        double v = sigma_clas(t, ov);
        CHECK(v >= 0.0);
        CHECK(v <= ov.temperature * (1.0 + 1e-12));
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("classical pair satisfies sigma' = D + 2 Omega sigma") {
    for (double g : {0.5, 1.0, 2.0, 4.0, 200.0}) {
        ClassicalParams cp{g, 25.2};
        for (double t = 0.05; t <= 8.0; t += 0.37) {
            auto sus = eval_susceptibility(t, g);
            double omega = sus.dchi_q / sus.chi_q;
            double lhs = sigma_clas_deriv(t, cp);
            double dd = d_clas(t, cp);
            double cross = 2.0 * omega * sigma_clas(t, cp);
            // D and 2 Omega sigma cancel against each other near the chi_q
            // zeros; skip where the cancellation outruns double precision
            double cond = (std::abs(dd) + std::abs(cross)) / std::max(std::abs(lhs), 1e-12);
            if (cond > 1e4) continue;
            double rhs = dd + cross;
            double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-12});
            CHECK(std::abs(lhs - rhs) / scale < 1e-8);
        }
    }
}

TEST_CASE("sigma_clas_deriv matches finite differences") {
    for (double g : {1.0, 2.0, 4.0}) {
        ClassicalParams cp{g, 2.0};
        double err = fd_check([&](double x) { return sigma_clas(x, cp); },
                              [&](double x) { return sigma_clas_deriv(x, cp); }, 1.3, 1e-4);
        CHECK(err < 1e-8);
    }
}

TEST_CASE("classical branches are continuous across the seam") {
    ClassicalParams lo{2.0 - 1e-7, 1.0}, mid{2.0, 1.0}, hi{2.0 + 1e-7, 1.0};
    for (double t : {0.2, 1.0, 3.0, 7.0}) {
        CHECK(d_clas(t, lo) == doctest::Approx(d_clas(t, mid)).epsilon(1e-6));
        CHECK(d_clas(t, hi) == doctest::Approx(d_clas(t, mid)).epsilon(1e-6));
        CHECK(sigma_clas(t, lo) == doctest::Approx(sigma_clas(t, mid)).epsilon(1e-6));
        CHECK(sigma_clas(t, hi) == doctest::Approx(sigma_clas(t, mid)).epsilon(1e-6));
        CHECK(phi_phi_clas(t, 0.4, lo) == doctest::Approx(phi_phi_clas(t, 0.4, mid)).epsilon(1e-5).scale(1.0));
    }
}
