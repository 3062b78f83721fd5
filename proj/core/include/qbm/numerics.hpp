#pragma once

#include <complex>
#include <functional>

#include "qbm/params.hpp"

namespace qbm {

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
    long evaluations = 0;
    bool converged = false;
};

struct SumResult {
    double value = 0.0;
    long n_used = 0;
    double tail_bound = 0.0;
    bool converged = false;  // false when n_max was hit first
};

// Sums term(n) for n = 1, 2, ... until tail_bound(n) (when provided) or a
// local geometric estimate of the remainder drops below rel_tol * |partial|.
// Accumulation order is fixed (ascending n), so results are reproducible.
SumResult sum_with_tail(const std::function<double(long)>& term,
                        const SeriesControl& control,
                        const std::function<double(long)>& tail_bound = nullptr);

// Adaptive Simpson quadrature with Richardson extrapolation per panel.
// converged implies est_error <= max(abs_tol, rel_tol*|value|).
QuadResult adaptive_quad(const std::function<double(double)>& f, double a, double b,
                         const QuadControl& control);

// cot with a Laurent expansion for |x| < 1e-2; the direct cos/sin form loses
// all significant digits for the ~1e-7 arguments this model produces.
double cot_small(double x);
std::complex<double> cot_small(std::complex<double> x);

// Bisection on a bracketing interval; requires f(lo) and f(hi) of opposite sign.
double bracket_root(const std::function<double(double)>& f, double lo, double hi,
                    double xtol = 1e-14, double ftol = 1e-12);

// Relative error of df against a Richardson-extrapolated centered difference of f.
double fd_check(const std::function<double(double)>& f,
                const std::function<double(double)>& df, double t, double h);

}  // namespace qbm
