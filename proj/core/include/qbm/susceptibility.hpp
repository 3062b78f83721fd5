#pragma once

#include <vector>

#include "qbm/params.hpp"

namespace qbm {

// chi_q, chi_v solve x'' + gamma x' + x = 0 with (1,0) and (0,1) initial data.
// In scaled units chi_q' = -chi_v identically.
struct SusceptibilityValue {
    double chi_q;
    double chi_v;
    double dchi_q;
    double dchi_v;
};

struct PoleList {
    std::vector<double> times;  // ascending zeros of chi_q in (0, t_max]
    double guard_width = 1e-6;  // half-width of the exclusion window around each zero

    bool in_guard(double t) const;
    // nearest pole within `width` of t, or -1
    double nearest_within(double t, double width) const;
};

SusceptibilityValue eval_susceptibility(double t, const ModelParams& params);

// Convenience overload used by the classical module (same homogeneous equation).
SusceptibilityValue eval_susceptibility(double t, double gamma);

// Omega(t) = chi_q'(t)/chi_q(t). Throws PoleError inside a guard window.
double drift_frequency(double t, const ModelParams& params, const PoleList& poles);
double drift_frequency(double t, const ModelParams& params);  // no guard check

// Zeros of chi_q (poles of Omega). Nonempty only in the periodic regime, where
// they solve tan(omega_tilde t/2) = -omega_tilde/gamma. Each zero is refined
// until |chi_q| < 1e-12.
PoleList find_chi_q_zeros(const ModelParams& params, double t_max);

}  // namespace qbm
