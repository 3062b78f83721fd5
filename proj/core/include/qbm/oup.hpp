#pragma once

#include <cstdint>
#include <vector>

#include "qbm/params.hpp"
#include "qbm/susceptibility.hpp"

namespace qbm {

// Time-sampled coefficients Omega(t), D(t) with linear interpolation between
// grid points. The grid must resolve the dynamics (>= 10 points per period in
// the periodic regime).
struct CoefficientTable {
    std::vector<double> times;
    std::vector<double> omega;
    std::vector<double> diffusion;
    std::vector<std::pair<double, double>> pole_windows;

    double omega_at(double t) const;
    double diffusion_at(double t) const;
    double min_diffusion(double t_max) const;
    bool crosses_pole(double t0, double t1) const;
};

struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> mean;
    std::vector<double> variance;   // unbiased (n-1) estimator
    std::vector<double> std_error;  // of the variance: variance*sqrt(2/(n_paths-1))
    long n_paths = 0;
    std::uint64_t seed = 0;
};

// Euler-Maruyama ensemble for dq = Omega(t) q dt + sqrt(D(t) dt) N(0,1),
// q(0) = 0, the sign convention under which Var solves sigma' = D + 2 Omega sigma.
// Per-path streams are derived deterministically from (seed, path),
// and the reduction runs in fixed chunk order, so results are bitwise
// reproducible for any thread count. Refuses (DomainError) if D < 0 anywhere
// on the simulated window.
EnsembleStats simulate_ensemble(const CoefficientTable& coeffs, long n_paths, double dt,
                                double t_max, std::uint64_t seed, int max_outputs = 201);

// RK4 integration of sigma' = D(t) + 2 Omega(t) sigma, sigma(t0) = sigma0,
// on the given grid. Valid for negative D as well. Throws PoleError if a step
// would cross a pole window.
std::vector<double> variance_ode(const CoefficientTable& coeffs, const std::vector<double>& t_grid,
                                 double sigma0);

}  // namespace qbm
