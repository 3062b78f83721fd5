#include "qbm/diffusion.hpp"

#include <cmath>
#include <limits>

#include "qbm/numerics.hpp"
#include "parallel.hpp"

namespace qbm {

DiffusionEngine::DiffusionEngine(const ModelParams& params, double t_max_poles)
    : kernel_(params), poles_(find_chi_q_zeros(params, t_max_poles)) {}

ComplexSample DiffusionEngine::d1_impl(double t, std::uint32_t& flags, bool nothrow) const {
    const ModelParams& p = kernel_.params();
    const double t_min = p.quad.t_min;
    if (t < t_min) throw DomainError("d1 requires t >= t_min");

    bool clamped = false;
    auto f_re = [&](double s) {
        auto v = kernel_.phi_phi(t, s);
        clamped = clamped || v.clamped;
        return v.value.re;
    };
    auto f_im = [&](double s) { return kernel_.phi_phi(t, s).value.im; };

    QuadResult ire = adaptive_quad(f_re, t_min, t, p.quad);
    QuadResult iim = adaptive_quad(f_im, t_min, t, p.quad);
    if (!ire.converged || !iim.converged) {
        flags |= kFlagQuadNotConverged;
        if (!nothrow)
            throw NumericError("d1: inner quadrature did not converge",
                               std::max(ire.est_error, iim.est_error));
    }
    if (clamped) flags |= kFlagClamped;

    auto sus = eval_susceptibility(t, p);
    ComplexSample pq = kernel_.phi_q0(t);
    return {2.0 * (ire.value + sus.chi_q * pq.re), 2.0 * (iim.value + sus.chi_q * pq.im)};
}

ComplexSample DiffusionEngine::d1(double t, std::uint32_t* flags) const {
    std::uint32_t local = 0;
    auto v = d1_impl(t, local, false);
    if (flags) *flags |= local;
    return v;
}

ComplexSample DiffusionEngine::sigma1(double t, std::uint32_t* flags) const {
    const ModelParams& p = kernel_.params();
    const double t_min = p.quad.t_min;
    if (t < t_min) throw DomainError("sigma1 requires t >= t_min");
    std::uint32_t local = 0;
    auto fre = [&](double u) { return d1_impl(u, local, true).re; };
    auto fim = [&](double u) { return d1_impl(u, local, true).im; };
    // the outer integrand is smooth (no Omega in sigma1); a fixed relative
    // goal on the outer pass is enough
    QuadControl outer = p.quad;
    outer.rel_tol = std::max(p.quad.rel_tol, 1e-8);
    QuadResult re = adaptive_quad(fre, t_min, t, outer);
    QuadResult im = adaptive_quad(fim, t_min, t, outer);
    if (!re.converged || !im.converged) local |= kFlagQuadNotConverged;
    if (flags) *flags |= local;
    return {re.value, im.value};
}

ComponentValue DiffusionEngine::sigma_q(double t, std::uint32_t* flags) const {
    auto s1 = sigma1(t, flags);
    auto sus = eval_susceptibility(t, kernel_.params());
    double tcv2 = kernel_.params().temperature * sus.chi_v * sus.chi_v;
    ComponentValue v;
    v.re = s1.re + tcv2;  // the T chi_v^2 piece belongs to the real component
    v.im = s1.im;
    v.total = v.re + v.im;
    return v;
}

ComponentValue DiffusionEngine::d_q(double t, std::uint32_t* flags) const {
    const ModelParams& p = kernel_.params();
    if (poles_.in_guard(t))
        throw PoleError("d_q inside a pole guard window", poles_.nearest_within(t, poles_.guard_width));
    auto s_q = sigma_q(t, flags);
    auto d1v = d1(t, flags);
    auto sus = eval_susceptibility(t, p);
    double omega = sus.dchi_q / sus.chi_q;
    double sdot_re = d1v.re + 2.0 * p.temperature * sus.chi_v * sus.dchi_v;
    ComponentValue v;
    v.re = sdot_re - 2.0 * s_q.re * omega;
    v.im = d1v.im - 2.0 * s_q.im * omega;
    v.total = v.re + v.im;
    if (flags && poles_.nearest_within(t, 10.0 * poles_.guard_width) >= 0.0)
        *flags |= kFlagNearPole;
    return v;
}

CoefficientSeries coefficient_series(const ModelParams& params, const std::vector<double>& t_grid) {
    const double t_min = params.quad.t_min;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < t_min) throw DomainError("grid points must be >= t_min");
        if (i > 0 && t_grid[i] <= t_grid[i - 1]) throw DomainError("grid must be ascending");
    }

    CoefficientSeries out;
    out.times = t_grid;
    const std::size_t n = t_grid.size();
    out.omega_drift.resize(n);
    out.sigma_q.resize(n);
    out.d_q.resize(n);
    out.d1.resize(n);
    out.flags.assign(n, 0);
    if (n == 0) return out;

    DiffusionEngine engine(params, t_grid.back() + 1.0);
    const PoleList& poles = engine.poles();
    for (double tp : poles.times)
        out.pole_windows.emplace_back(tp - poles.guard_width, tp + poles.guard_width);

    const double nan = std::numeric_limits<double>::quiet_NaN();

    // per-point D1 and flags (parallel; slots are independent)
    std::vector<ComplexSample> d1v(n);
    detail::parallel_for(static_cast<long>(n), [&](long i) {
        double t = t_grid[i];
        std::uint32_t fl = 0;
        if (poles.in_guard(t)) {
            out.flags[i] |= kFlagInPoleWindow;
            d1v[i] = {nan, nan};
            return;
        }
        d1v[i] = engine.d1_impl(t, fl, true);
        out.flags[i] = fl;
    });

    // cumulative sigma1 over the grid intervals, reusing memoized d1 values;
    // pole windows are measure ~2e-6 and d1 is smooth there, so integration
    // panels may cross them
    std::vector<ComplexSample> s1(n);
    std::uint32_t cumulative_flags = 0;
    {
        DiffusionEngine& eng = engine;
        double prev_t = t_min;
        ComplexSample acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            double t = t_grid[i];
            std::uint32_t fl = 0;
            auto fre = [&](double u) { return eng.d1_impl(u, fl, true).re; };
            auto fim = [&](double u) { return eng.d1_impl(u, fl, true).im; };
            QuadControl panel = params.quad;
            panel.rel_tol = std::max(params.quad.rel_tol, 1e-8);
            QuadResult qre = adaptive_quad(fre, prev_t, t, panel);
            QuadResult qim = adaptive_quad(fim, prev_t, t, panel);
            acc.re += qre.value;
            acc.im += qim.value;
            if (!qre.converged || !qim.converged) fl |= kFlagQuadNotConverged;
            cumulative_flags |= fl & kFlagQuadNotConverged;
            out.flags[i] |= fl | cumulative_flags;
            s1[i] = acc;
            prev_t = t;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        double t = t_grid[i];
        auto sus = eval_susceptibility(t, params);
        if (out.flags[i] & kFlagInPoleWindow) {
            out.omega_drift[i] = nan;
            out.sigma_q[i] = {nan, nan, nan};
            out.d_q[i] = {nan, nan, nan};
            out.d1[i] = {nan, nan, nan};
            continue;
        }
        double omega = sus.dchi_q / sus.chi_q;
        out.omega_drift[i] = omega;
        ComponentValue sq;
        sq.re = s1[i].re + params.temperature * sus.chi_v * sus.chi_v;
        sq.im = s1[i].im;
        sq.total = sq.re + sq.im;
        out.sigma_q[i] = sq;
        ComponentValue d1c{d1v[i].re, d1v[i].im, d1v[i].re + d1v[i].im};
        out.d1[i] = d1c;
        double sdot_re = d1v[i].re + 2.0 * params.temperature * sus.chi_v * sus.dchi_v;
        ComponentValue dq;
        dq.re = sdot_re - 2.0 * sq.re * omega;
        dq.im = d1v[i].im - 2.0 * sq.im * omega;
        dq.total = dq.re + dq.im;
        out.d_q[i] = dq;
        if (poles.nearest_within(t, 10.0 * poles.guard_width) >= 0.0)
            out.flags[i] |= kFlagNearPole;
    }

    // t_min floor sensitivity of the first reported D_Q
    if (n > 0 && !(out.flags[0] & kFlagInPoleWindow)) {
        ModelParams half = params;
        half.quad.t_min = t_min / 2.0;
        DiffusionEngine engine_half(half, t_grid.front() + 1.0);
        std::uint32_t fl = 0;
        double base = out.d_q[0].total;
        double alt = engine_half.d_q(std::max(t_grid.front(), half.quad.t_min), &fl).total;
        out.tmin_sensitivity = std::abs(alt - base) / std::max(std::abs(base), 1e-300);
    }
    return out;
}

}  // namespace qbm
