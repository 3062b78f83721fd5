#include "qbm/correlations.hpp"

#include <cmath>
#include <complex>

#include "qbm/numerics.hpp"
#include "qbm/susceptibility.hpp"

namespace qbm {

namespace {

using cplx = std::complex<double>;

constexpr double kAperiodicBand = 1e-8;

// ---- Matsubara kernels -----------------------------------------------------

// printed kernel: 2 g T (-nu_n)^o nu_n e^{-nu_n t} / (nu_n^2 + g nu_n + 1)
double xi_term(long n, double t, double gamma, double T, double nu, int order) {
    double vn = static_cast<double>(n) * nu;
    double arg = vn * t;
    double ex = arg < 708.0 ? std::exp(-arg) : 0.0;
    if (ex == 0.0) return 0.0;
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    return 2.0 * gamma * T * sign * std::pow(vn, order) * vn * ex / (vn * vn + gamma * vn + 1.0);
}

// regularized kernel: extra factor (nu_n^2 - g nu_n + 1) in the denominator
double reg_term(long n, double t, double gamma, double T, double nu, int order) {
    double vn = static_cast<double>(n) * nu;
    double arg = vn * t;
    double ex = arg < 708.0 ? std::exp(-arg) : 0.0;
    if (ex == 0.0) return 0.0;
    double sign = (order % 2 == 0) ? 1.0 : -1.0;
    double den = (vn * vn + gamma * vn + 1.0) * (vn * vn - gamma * vn + 1.0);
    return 2.0 * gamma * T * sign * std::pow(vn, order) * vn * ex / den;
}

// Certified tail bounds by integral/geometric comparison of the term envelopes.
std::function<double(long)> xi_tail(double t, double gamma, double T, double nu, int order) {
    return [=](long n) -> double {
        if (t <= 0.0) return INFINITY;  // order 0 at t = 0 is logarithmic
        double x = std::exp(-nu * t);
        if (x >= 1.0) return INFINITY;
        double xn1 = std::pow(x, static_cast<double>(n + 1));
        double c = 2.0 * gamma * T;
        switch (order) {
            case 0: return c / (nu * (n + 1)) * xn1 / (1.0 - x);
            case 1: return c * xn1 / (1.0 - x);
            default: {  // order 2: sum_{m>n} m x^m = x^{n+1}((n+1)(1-x)+x)/(1-x)^2
                double om = 1.0 - x;
                return c * nu * xn1 * ((n + 1) * om + x) / (om * om);
            }
        }
    };
}

std::function<double(long)> reg_tail(double t, double gamma, double T, double nu, int order) {
    return [=](long n) -> double {
        double vn1 = (n + 1) * nu;
        if (vn1 < 2.0 * gamma) return INFINITY;  // envelope bound not valid yet
        double c = 4.0 * gamma * T;              // |term| <= c nu_n^{order-3} e^{-nu_n t}
        if (t <= 0.0) {
            switch (order) {
                case 0: return c / (nu * nu * nu) * 0.5 / (static_cast<double>(n) * n);
                case 1: return c / (nu * nu * static_cast<double>(n));
                default: return INFINITY;  // order 2 at t = 0 is logarithmic
            }
        }
        double x = std::exp(-nu * t);
        if (x >= 1.0) return INFINITY;
        double xn1 = std::pow(x, static_cast<double>(n + 1));
        return c * std::pow(vn1, order - 3.0) * xn1 / (1.0 - x);
    };
}

SumResult run_sum(double t, const ModelParams& p, int order, bool regularized) {
    auto term = [&](long n) {
        return regularized ? reg_term(n, t, p.gamma, p.temperature, p.nu, order)
                           : xi_term(n, t, p.gamma, p.temperature, p.nu, order);
    };
    auto tail = regularized ? reg_tail(t, p.gamma, p.temperature, p.nu, order)
                            : xi_tail(t, p.gamma, p.temperature, p.nu, order);
    return sum_with_tail(term, p.series, tail);
}

// ---- analytic part of S and derivatives -----------------------------------

struct SBracket {
    double s0, s1, s2;  // k-th derivative of the cot bracket part of S
};

SBracket analytic_s(double t, const ModelParams& p) {
    double T = p.temperature, nu = p.nu, gamma = p.gamma;
    double w2 = p.omega_sq();
    SBracket out{};
    if (std::abs(w2) >= kAperiodicBand) {
        cplx w = std::sqrt(cplx(w2));
        cplx l1 = (gamma + w) / 2.0, l2 = (gamma - w) / 2.0;
        cplx pref = M_PI * T / nu / w;
        cplx c1 = cot_small(cplx(M_PI / nu) * l1);
        cplx c2 = cot_small(cplx(M_PI / nu) * l2);
        cplx e1 = std::exp(-l1 * t), e2 = std::exp(-l2 * t);
        cplx z0 = pref * (c2 * e2 - c1 * e1);
        cplx z1 = pref * (-l2 * c2 * e2 + l1 * c1 * e1);
        cplx z2 = pref * (l2 * l2 * c2 * e2 - l1 * l1 * c1 * e1);
        for (cplx z : {z0, z1, z2}) {
            if (std::abs(z.imag()) > 1e-9 * std::max(std::abs(z.real()), 1e-300))
                throw NumericError("position correlation: conjugate cancellation failed",
                                   std::abs(z.imag()));
        }
        out = {z0.real(), z1.real(), z2.real()};
    } else {
        // w -> 0 limit with first-order w^2 corrections (odd central differences
        // of F(l) = cot(pi l/nu) e^{-l t} around l = gamma/2)
        double m = gamma / 2.0, a = M_PI / nu;
        double c = cot_small(a * m);
        double c1 = -a * (1.0 + c * c);
        double c2 = 2.0 * a * a * c * (1.0 + c * c);
        double c3 = -2.0 * a * a * a * (1.0 + c * c) * (1.0 + 3.0 * c * c);
        double e = std::exp(-m * t);
        double F0 = c;
        double F1 = c1 - t * c;
        double F2 = c2 - 2.0 * t * c1 + t * t * c;
        double F3 = c3 - 3.0 * t * c2 + 3.0 * t * t * c1 - t * t * t * c;
        double pre = M_PI * T / nu;
        out.s0 = -pre * e * (F1 + w2 / 24.0 * F3);
        double G1 = F0 + m * F1, G3 = 3.0 * F2 + m * F3;
        out.s1 = pre * e * (G1 + w2 / 24.0 * G3);
        double H1 = 2.0 * m * F0 + m * m * F1;
        double H3 = 6.0 * F1 + 6.0 * m * F2 + m * m * F3;
        out.s2 = -pre * e * (H1 + w2 / 24.0 * H3);
    }
    return out;
}

}  // namespace

SumResult gamma_sum_full(double t, const ModelParams& params, int order) {
    if (order < 0 || order > 2) throw DomainError("gamma_sum order must be 0, 1 or 2");
    if (order == 0 && t < 0.0) throw DomainError("gamma_sum requires t >= 0");
    if (order >= 1 && t <= 0.0)
        throw DomainError("gamma_sum: term-by-term derivative sum diverges at t = 0");
    return run_sum(t, params, order, false);
}

double gamma_sum(double t, const ModelParams& params, int order) {
    return gamma_sum_full(t, params, order).value;
}

double gamma_sum_regularized(double t, const ModelParams& params, int order) {
    if (order < 0 || order > 2) throw DomainError("gamma_sum order must be 0, 1 or 2");
    if (t < 0.0) throw DomainError("gamma_sum requires t >= 0");
    if (order == 2 && t == 0.0)
        throw DomainError("regularized gamma sum of order 2 diverges at t = 0");
    return run_sum(t, params, order, true).value;
}

double xi_q0_correlation(double t, const ModelParams& params) {
    if (!(t > 0.0)) throw DomainError("xi_q0_correlation requires t > 0");
    return -gamma_sum(t, params, 0);
}

CorrSample eval_correlation(double t, const ModelParams& params, bool derivatives) {
    if (t < 0.0) throw DomainError("correlation requires t >= 0");
    CorrSample c{};
    SBracket sb = analytic_s(t, params);
    SumResult g0 = run_sum(t, params, 0, true);
    c.S = sb.s0 - g0.value;
    auto sus = eval_susceptibility(t, params);
    double hbar_half = M_PI * params.temperature / params.nu;  // hbar/2 in scaled units
    c.A = -hbar_half * sus.chi_v;
    if (derivatives) {
        if (!(t > 0.0)) throw DomainError("correlation derivatives require t > 0");
        SumResult g1 = run_sum(t, params, 1, true);
        SumResult g2 = run_sum(t, params, 2, true);
        c.dS = sb.s1 - g1.value;
        c.d2S = sb.s2 - g2.value;
        c.dA = -hbar_half * sus.dchi_v;
        c.d2A = hbar_half * (params.gamma * sus.dchi_v + sus.chi_v);
    }
    return c;
}

ComplexSample position_correlation(double t, const ModelParams& params) {
    auto c = eval_correlation(t, params, false);
    return {c.S, c.A};
}

ComplexSample velocity_position_correlation(double t, const ModelParams& params) {
    if (t < params.quad.t_min)
        throw DomainError("velocity_position_correlation requires t >= t_min");
    auto c = eval_correlation(t, params, true);
    return {c.dS, c.dA};
}

ComplexSample velocity_correlation(double t, const ModelParams& params) {
    if (t < params.quad.t_min) throw DomainError("velocity_correlation requires t >= t_min");
    auto c = eval_correlation(t, params, true);
    return {-c.d2S, -c.d2A};
}

Dispersions dispersions(const ModelParams& params) {
    double T = params.temperature, gamma = params.gamma, nu = params.nu, wd = params.omega_d;
    // <q0^2>: classical n = 0 term plus twice the positive Matsubara branch
    auto q_term = [&](long n) {
        double vn = static_cast<double>(n) * nu;
        return 2.0 * T / (1.0 + vn * vn + gamma * vn);
    };
    auto q_tail = [&](long n) { return 2.0 * T / (nu * nu * static_cast<double>(n)); };
    SumResult q = sum_with_tail(q_term, params.series, q_tail);

    // <v0^2>: Drude-regularized; diverges logarithmically as omega_d -> infinity
    auto v_term = [&](long n) {
        double vn = static_cast<double>(n) * nu;
        return 2.0 * T * (wd + vn + gamma * wd * vn) / ((1.0 + vn * vn) * (wd + vn) + gamma * wd * vn);
    };
    auto v_tail = [&](long n) {
        return 2.0 * T * (2.0 + gamma) / nu * std::log1p(wd / (nu * static_cast<double>(n)));
    };
    SumResult v = sum_with_tail(v_term, params.series, v_tail);

    Dispersions d;
    d.q0_sq = T + q.value;
    d.v0_sq = T + v.value;
    ComplexSample vq = velocity_position_correlation(params.quad.t_min, params);
    d.v0q0 = vq;  // documented surrogate for the t = 0 limit
    return d;
}

}  // namespace qbm
