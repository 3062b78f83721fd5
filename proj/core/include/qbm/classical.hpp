#pragma once

#include "qbm/susceptibility.hpp"

namespace qbm {

// Classical Markovian limit: white noise <xi(t)xi(s)> = 2 gamma T delta(t-s).
// All three regime branches are hard-coded closed forms; no complex
// arithmetic at runtime.
struct ClassicalParams {
    double gamma;
    double temperature;

    void validate() const;
};

// <phi_v(t) phi_v(s)> = 2 gamma T int_0^min(t,s) chi_v'(t-x) chi_v'(s-x) dx,
// in closed form. Symmetric in (t, s).
double phi_phi_clas(double t, double s, const ClassicalParams& params);

// D_clas(t) = 4T / (gamma + w coth(w t/2)); periodic branch uses w~ cot(w~ t/2)
// and inherits the poles of Omega (flagged by callers, not suppressed).
double d_clas(double t, const ClassicalParams& params);

// sigma_clas(t) = T[1 - e^{-gamma t}((gamma^2-2)cosh(w t) + gamma w sinh(w t) - 2)/w^2]
// evaluated in overflow-safe eigenvalue form.
double sigma_clas(double t, const ClassicalParams& params);

// Analytic d/dt of sigma_clas (used by the identity tests and D1 cross-checks).
double sigma_clas_deriv(double t, const ClassicalParams& params);

}  // namespace qbm
