#include "qbm/susceptibility.hpp"

#include <algorithm>
#include <cmath>

#include "qbm/numerics.hpp"

namespace qbm {

namespace {

// Branch threshold on w^2 = gamma^2 - 4. Inside the band the exact w -> 0
// limits plus first-order w^2 corrections are used, which keeps C1 continuity
// in gamma across the seam.
constexpr double kAperiodicBand = 1e-8;

SusceptibilityValue eval_impl(double t, double gamma) {
    if (t < 0.0) throw DomainError("susceptibility requires t >= 0");
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    double w2 = gamma * gamma - 4.0;
    SusceptibilityValue v{};
    if (std::abs(w2) < kAperiodicBand) {
        double e = std::exp(-gamma * t / 2.0);
        double t2 = t * t, t3 = t2 * t;
        v.chi_q = e * (1.0 + gamma * t / 2.0 + w2 * t2 / 8.0 + gamma * w2 * t3 / 48.0);
        v.chi_v = e * (t + w2 * t3 / 24.0);
        v.dchi_v = e * (1.0 - gamma * t / 2.0 + w2 * t2 / 8.0 - gamma * w2 * t3 / 48.0);
    } else if (w2 < 0.0) {
        double wt = std::sqrt(-w2);
        double e = std::exp(-gamma * t / 2.0);
        double c = std::cos(wt * t / 2.0), s = std::sin(wt * t / 2.0);
        v.chi_q = e * (c + gamma / wt * s);
        v.chi_v = e * 2.0 / wt * s;
        v.dchi_v = e * (c - gamma / wt * s);
    } else {
        // eigenvalue form; safe against cosh overflow at large gamma*t
        double w = std::sqrt(w2);
        double l1 = (gamma + w) / 2.0, l2 = (gamma - w) / 2.0;
        double e1 = std::exp(-l1 * t), e2 = std::exp(-l2 * t);
        v.chi_q = (l1 * e2 - l2 * e1) / w;
        v.chi_v = (e2 - e1) / w;
        v.dchi_v = (l1 * e1 - l2 * e2) / w;
    }
    v.dchi_q = -v.chi_v;
    return v;
}

}  // namespace

SusceptibilityValue eval_susceptibility(double t, const ModelParams& params) {
    return eval_impl(t, params.gamma);
}

SusceptibilityValue eval_susceptibility(double t, double gamma) { return eval_impl(t, gamma); }

bool PoleList::in_guard(double t) const {
    for (double tp : times)
        if (std::abs(t - tp) <= guard_width) return true;
    return false;
}

double PoleList::nearest_within(double t, double width) const {
    double best = -1.0, dist = width;
    for (double tp : times) {
        if (std::abs(t - tp) <= dist) {
            dist = std::abs(t - tp);
            best = tp;
        }
    }
    return best;
}

double drift_frequency(double t, const ModelParams& params, const PoleList& poles) {
    if (t < 0.0) throw DomainError("drift_frequency requires t >= 0");
    for (double tp : poles.times) {
        if (std::abs(t - tp) <= poles.guard_width)
            throw PoleError("drift frequency evaluated inside a pole guard window", tp);
    }
    return drift_frequency(t, params);
}

double drift_frequency(double t, const ModelParams& params) {
    auto v = eval_susceptibility(t, params);
    return v.dchi_q / v.chi_q;
}

PoleList find_chi_q_zeros(const ModelParams& params, double t_max) {
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    PoleList poles;
    Regime regime = classify_regime(params.gamma);
    if (regime.kind != RegimeKind::Periodic) return poles;  // chi_q > 0 for gamma >= 2

    double wt = regime.omega_tilde;
    auto chi_q = [&](double t) { return eval_susceptibility(t, params).chi_q; };
    // zeros solve tan(wt t/2) = -wt/gamma, one per tangent branch; a scan at
    // pi/(8 wt) cannot skip a sign change
    double step = M_PI / (8.0 * wt);
    double prev_t = 0.0, prev_v = chi_q(0.0);
    for (double t = step; prev_t < t_max; t += step) {
        double tc = std::min(t, t_max);
        double v = chi_q(tc);
        if ((prev_v > 0.0) != (v > 0.0)) {
            double lo = prev_t, hi = tc;
            for (int i = 0; i < 200; ++i) {
                double mid = 0.5 * (lo + hi);
                double fm = chi_q(mid);
                if (std::abs(fm) < 1e-12) {
                    lo = hi = mid;
                    break;
                }
                if ((fm > 0.0) == (prev_v > 0.0)) lo = mid;
                else hi = mid;
            }
            double root = 0.5 * (lo + hi);
            if (root > 0.0 && root <= t_max) poles.times.push_back(root);
        }
        prev_t = tc;
        prev_v = v;
        if (tc >= t_max) break;
    }
    std::sort(poles.times.begin(), poles.times.end());
    return poles;
}

}  // namespace qbm
