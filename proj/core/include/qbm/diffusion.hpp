#pragma once

#include <cstdint>
#include <vector>

#include "qbm/noise_corr.hpp"

namespace qbm {

// Per-point status flags in a CoefficientSeries.
enum PointFlag : std::uint32_t {
    kFlagNone = 0,
    kFlagInPoleWindow = 1u << 0,   // inside a guard window; values not reported
    kFlagNearPole = 1u << 1,       // within 10*guard_width of a pole; reported as-is
    kFlagClamped = 1u << 2,        // a |t-s| < t_min clamp occurred in phi_phi
    kFlagQuadNotConverged = 1u << 3,
    kFlagSeriesTruncated = 1u << 4,
};

struct ComponentValue {
    double re = 0.0;
    double im = 0.0;
    double total = 0.0;  // always re + im (the component sum rule)
};

struct CoefficientSeries {
    std::vector<double> times;
    std::vector<double> omega_drift;
    std::vector<ComponentValue> sigma_q;
    std::vector<ComponentValue> d_q;
    std::vector<ComponentValue> d1;
    std::vector<std::uint32_t> flags;
    std::vector<std::pair<double, double>> pole_windows;
    // Relative change of D_Q at the first grid point when the t_min floor is
    // halved; the t -> 0 surrogates make this the dominant uncertainty there.
    double tmin_sensitivity = 0.0;
};

// D1, sigma1, sigma_Q, D_Q at a single time. The scalar forms integrate from
// t_min on every call; batch work goes through coefficient_series.
class DiffusionEngine {
  public:
    explicit DiffusionEngine(const ModelParams& params, double t_max_poles = 100.0);

    const NoiseKernel& kernel() const { return kernel_; }
    const PoleList& poles() const { return poles_; }

    // D1(t) = 2[ int_{t_min}^t <phi_v(t) phi_v(t')> dt' + chi_q(t) <phi_v(t) q0> ],
    // per component.
    ComplexSample d1(double t, std::uint32_t* flags = nullptr) const;

    // sigma1(t) = int_{t_min}^t D1, per component.
    ComplexSample sigma1(double t, std::uint32_t* flags = nullptr) const;

    // sigma_Q = sigma1 + T chi_v^2 (the T chi_v^2 piece belongs to the real
    // component); total = re + im.
    ComponentValue sigma_q(double t, std::uint32_t* flags = nullptr) const;

    // D_Q = sigma_Q' - 2 sigma_Q Omega with sigma_Q' = D1 + 2 T chi_v chi_v'
    // taken analytically. Throws PoleError inside a guard window.
    ComponentValue d_q(double t, std::uint32_t* flags = nullptr) const;

  private:
    friend CoefficientSeries coefficient_series(const ModelParams&, const std::vector<double>&);
    ComplexSample d1_impl(double t, std::uint32_t& flags, bool nothrow) const;

    NoiseKernel kernel_;
    PoleList poles_;
};

// Batch evaluation on an ascending grid (all points >= t_min). Element errors
// become per-point flags, never a global failure. Grid points falling inside
// a pole window are flagged and carry NaN values.
CoefficientSeries coefficient_series(const ModelParams& params, const std::vector<double>& t_grid);

}  // namespace qbm
