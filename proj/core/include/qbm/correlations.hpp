#pragma once

#include "qbm/numerics.hpp"
#include "qbm/params.hpp"

namespace qbm {

// Two-part sample of a correlation quantity: <q(t)q0> = S(t) + i A(t) and its
// derivatives. Components are carried separately throughout; they are never
// collapsed into a modulus.
struct ComplexSample {
    double re = 0.0;
    double im = 0.0;
};

struct Dispersions {
    double q0_sq;        // <q0^2>
    double v0_sq;        // <v0^2>, finite only because of the Drude cutoff
    ComplexSample v0q0;  // <v0 q0>, surrogate evaluated at t = t_min
};

// All six pieces of the position correlation at one time.
struct CorrSample {
    double S, A;      // <q(t)q0> = S + iA
    double dS, dA;    // d/dt
    double d2S, d2A;  // d^2/dt^2
};

// Matsubara sum  2 gamma T sum_n (-nu_n)^order nu_n e^{-nu_n t} / ((nu_n+l1)(nu_n+l2)),
// the kernel of <xi(t) q0>. Diverges term by term at t = 0 for order >= 1
// (DomainError); at t = 0, order 0 the sum is logarithmic and is truncated at
// n_max with converged = false.
double gamma_sum(double t, const ModelParams& params, int order);
SumResult gamma_sum_full(double t, const ModelParams& params, int order);

// Kernel of Gamma(t) inside S(t): same numerator with the extra factor
// (nu_n - l1)(nu_n - l2) in the denominator. This regularized form is what
// makes S(0) reproduce <q0^2>; see position_correlation.
double gamma_sum_regularized(double t, const ModelParams& params, int order);

// <q(t)q0>: re = (pi T/(nu w))[cot(pi l2/nu) e^{-l2 t} - cot(pi l1/nu) e^{-l1 t}] - Gamma(t),
// im = -(pi T/nu) chi_v(t). In the periodic regime the bracket pairs complex
// conjugates; the residual imaginary part is checked below 1e-12 relative and
// discarded. Near gamma = 2 a series branch in w^2 keeps C1 continuity.
ComplexSample position_correlation(double t, const ModelParams& params);

// <v(t)q0> = d/dt <q(t)q0>; requires t >= t_min (the Gamma derivative diverges at 0).
ComplexSample velocity_position_correlation(double t, const ModelParams& params);

// <v(t)v0> = -d^2/dt^2 <q(t)q0>; requires t >= t_min.
ComplexSample velocity_correlation(double t, const ModelParams& params);

// <q0^2>, <v0^2> equilibrium sums (Drude-regularized) plus the <v0 q0>
// surrogate at t_min.
Dispersions dispersions(const ModelParams& params);

// <xi(t) q0> = -gamma_sum(t, 0); always <= 0 for t > 0.
double xi_q0_correlation(double t, const ModelParams& params);

// Batched evaluation of all six correlation pieces (shared cot/Gamma work).
CorrSample eval_correlation(double t, const ModelParams& params, bool derivatives = true);

}  // namespace qbm
