#include <doctest.h>

#include <cmath>

#include "qbm/classical.hpp"
#include "qbm/diffusion.hpp"
#include "qbm/numerics.hpp"

using namespace qbm;

namespace {

ModelParams fig_params(double gamma) {
    ModelParams p;
    p.gamma = gamma;
    p.temperature = 0.053;
    p.nu = 1e7;
    p.omega_d = 1e8;
    return p;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

TEST_CASE("d1 at the floor reduces to the initial-preparation term") {
    ModelParams p = fig_params(4.0);
    DiffusionEngine eng(p);
    double t_min = p.quad.t_min;
    auto v = eng.d1(t_min);
    auto pq = eng.kernel().phi_q0(t_min);
    double cq = eval_susceptibility(t_min, p).chi_q;
    CHECK(v.re == doctest::Approx(2.0 * cq * pq.re).epsilon(1e-12));
    CHECK(v.im == doctest::Approx(2.0 * cq * pq.im).epsilon(1e-12));
    CHECK_THROWS_AS(eng.d1(1e-5), DomainError);
}

TEST_CASE("d1 carries the overall factor of T") {
    ModelParams p = fig_params(4.0);
    p.temperature = 1e-9;
    DiffusionEngine eng(p);
    auto v = eng.d1(1.0);
    CHECK(std::abs(v.re) < 1e-8);
    CHECK(std::abs(v.im) < 1e-8);
}

TEST_CASE("adaptive inner integral agrees with a fixed 1e4-panel Simpson rule") {
    ModelParams p = fig_params(4.0);
    DiffusionEngine eng(p);
    double t = 2.0, t_min = p.quad.t_min;
    const NoiseKernel& k = eng.kernel();
    auto f = [&](double s) { return k.phi_phi(t, s).value.re; };
    long n = 10000;
    double h = (t - t_min) / n;
    double simpson = f(t_min) + f(t);
    for (long i = 1; i < n; ++i) simpson += (i % 2 ? 4.0 : 2.0) * f(t_min + i * h);
    simpson *= h / 3.0;
    QuadResult adaptive = adaptive_quad(f, t_min, t, p.quad);
    CHECK(adaptive.converged);
    CHECK(adaptive.value == doctest::Approx(simpson).epsilon(1e-6));
}

TEST_CASE("sigma1 vanishes at the floor and is continuous across poles") {
    ModelParams p = fig_params(1.0);
    DiffusionEngine eng(p);
    auto v = eng.sigma1(p.quad.t_min);
    CHECK(v.re == 0.0);
    CHECK(v.im == 0.0);
    // no Omega enters sigma1: values straddling the first chi_q zero stay close
    double t0 = 2.4183991523122905;
    auto a = eng.sigma1(t0 - 0.01);
    auto b = eng.sigma1(t0 + 0.01);
    CHECK(std::abs(b.re - a.re) < 0.05 * std::abs(a.re) + 1e-6);
}

TEST_CASE("sigma_q: sum rule is exact and the floor value is T chi_v^2") {
    ModelParams p = fig_params(4.0);
    DiffusionEngine eng(p);
    for (double t : {p.quad.t_min, 0.5, 2.0}) {
        auto v = eng.sigma_q(t);
        CHECK(v.total == v.re + v.im);  // bitwise, by construction
    }
    auto v0 = eng.sigma_q(p.quad.t_min);
    double tcv2 = p.temperature * std::pow(eval_susceptibility(p.quad.t_min, p).chi_v, 2);
    CHECK(v0.re == doctest::Approx(tcv2).epsilon(1e-12));
}

TEST_CASE("d_q: pole guard throws, fd identity holds away from poles") {
    ModelParams p = fig_params(1.0);
    DiffusionEngine eng(p);
    double t0 = 2.4183991523122905;
    CHECK_THROWS_AS(eng.d_q(t0 + 1e-8), PoleError);

    // sigma_Q' (finite difference) = D_Q + 2 Omega sigma_Q, the defining identity
    ModelParams p4 = fig_params(4.0);
    DiffusionEngine eng4(p4);
    for (double t : {0.5, 1.0, 3.0}) {
        double h = 1e-3;
        double fd = (eng4.sigma_q(t + h).total - eng4.sigma_q(t - h).total) / (2.0 * h);
        double omega = drift_frequency(t, p4);
        double rhs = eng4.d_q(t).total + 2.0 * omega * eng4.sigma_q(t).total;
        CHECK(fd == doctest::Approx(rhs).epsilon(1e-4));
    }
}

TEST_CASE("white-noise kernel through the same quadrature pipeline reproduces the closed forms") {
    // run D1 -> sigma1 -> sigma_Q -> D_Q on the classical white-noise
    // correlation (phi_q0 = 0) and compare with d_clas / sigma_clas
    ClassicalParams cp{4.0, 0.053};
    QuadControl qc;
    qc.abs_tol = 1e-13;
    qc.rel_tol = 1e-10;
    qc.max_depth = 48;
    auto d1_white = [&](double t) {
        auto f = [&](double s) { return phi_phi_clas(t, s, cp); };
        return 2.0 * adaptive_quad(f, 0.0, t, qc).value;
    };
    for (double t : {0.5, 1.5, 4.0}) {
        auto s1 = adaptive_quad(d1_white, 0.0, t, qc);
        auto sus = eval_susceptibility(t, cp.gamma);
        double sigma = s1.value + cp.temperature * sus.chi_v * sus.chi_v;
        CHECK(sigma == doctest::Approx(sigma_clas(t, cp)).epsilon(1e-4));
        double omega = sus.dchi_q / sus.chi_q;
        double dq = d1_white(t) + 2.0 * cp.temperature * sus.chi_v * sus.dchi_v -
                    2.0 * sigma * omega;
        CHECK(dq == doctest::Approx(d_clas(t, cp)).epsilon(1e-4));
    }
}

TEST_CASE("coefficient_series: single point equals the scalar operations") {
    ModelParams p = fig_params(4.0);
    auto series = coefficient_series(p, {1.0});
    DiffusionEngine eng(p);
    CHECK(series.times.size() == 1);
    CHECK(series.d1[0].re == doctest::Approx(eng.d1(1.0).re).epsilon(1e-10));
    CHECK(series.sigma_q[0].total == doctest::Approx(eng.sigma_q(1.0).total).epsilon(1e-7));
    CHECK(series.d_q[0].total == doctest::Approx(eng.d_q(1.0).total).epsilon(1e-6));
    CHECK(series.omega_drift[0] == drift_frequency(1.0, p));
    CHECK(series.tmin_sensitivity > 0.0);
}

TEST_CASE("coefficient_series: grid refinement stability") {
    ModelParams p = fig_params(4.0);
    auto coarse = coefficient_series(p, linspace(p.quad.t_min, 5.0, 26));
    auto fine = coefficient_series(p, linspace(p.quad.t_min, 5.0, 51));
    for (std::size_t i = 0; i < coarse.times.size(); ++i) {
        std::size_t j = 2 * i;  // shared abscissae
        CHECK(fine.times[j] == doctest::Approx(coarse.times[i]).epsilon(1e-14));
        CHECK(fine.sigma_q[j].total ==
              doctest::Approx(coarse.sigma_q[i].total).epsilon(1e-5).scale(1e-8));
        CHECK(fine.d_q[j].total == doctest::Approx(coarse.d_q[i].total).epsilon(1e-4).scale(1e-8));
    }
}

TEST_CASE("coefficient_series: pole windows annotated, not fatal") {
    ModelParams p = fig_params(1.0);
    double t0 = 2.4183991523122905;
    std::vector<double> grid = {1.0, 2.0, t0 - 3e-7, t0 + 5e-6, 3.0};
    auto series = coefficient_series(p, grid);
    REQUIRE(series.pole_windows.size() >= 1);
    CHECK((series.flags[2] & kFlagInPoleWindow) != 0);
    CHECK(std::isnan(series.d_q[2].total));
    CHECK((series.flags[3] & kFlagNearPole) != 0);
    CHECK(std::isfinite(series.d_q[3].total));
    CHECK(std::abs(series.d_q[3].total) > 100.0 * std::abs(series.d_q[0].total));
    CHECK((series.flags[0] & (kFlagInPoleWindow | kFlagNearPole)) == 0u);
    // in-window rows are excluded from reporting; their neighbors are intact
    CHECK(std::isfinite(series.sigma_q[4].total));
}

TEST_CASE("coefficient_series rejects bad grids") {
    ModelParams p = fig_params(4.0);
    CHECK_THROWS_AS(coefficient_series(p, {1e-5}), DomainError);
    CHECK_THROWS_AS(coefficient_series(p, {1.0, 0.5}), DomainError);
}
