#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "qbm/correlations.hpp"
#include "qbm/susceptibility.hpp"

namespace qbm {

struct TwoTimeSample {
    double t, s;
    ComplexSample value;
    bool clamped = false;  // |t-s| was below t_min and got clamped
};

// Assembles the noise correlations <phi_v(t) phi_v(s)> and <phi_v(t) q0> from
// position-correlation derivatives (the bypass of the singular csch^2
// integral). Holds the dispersion constants and a concurrent-read memo table
// of correlation samples keyed by time quantized to 1e-12.
class NoiseKernel {
  public:
    explicit NoiseKernel(const ModelParams& params);

    const ModelParams& params() const { return params_; }
    const Dispersions& disp() const { return disp_; }

    // Nine-term combination of <v v0>, <v q0> at t, s, t-s, the dispersions
    // and the susceptibility derivatives. Real part symmetric in (t,s); the
    // t-s argument is evaluated with odd parity on the imaginary part and is
    // clamped to t_min when |t-s| < t_min.
    TwoTimeSample phi_phi(double t, double s) const;

    // <phi_v(t) q0> = <v(t)q0> - chi_v'(t)<v0 q0> - chi_q'(t)<q0^2>.
    ComplexSample phi_q0(double t) const;

    // Memoized correlation sample (with derivatives).
    const CorrSample& corr(double t) const;

    std::size_t cache_size() const;

  private:
    ModelParams params_;
    Dispersions disp_;
    mutable std::unordered_map<std::int64_t, std::unique_ptr<CorrSample>> cache_;
    mutable std::shared_mutex mutex_;
};

}  // namespace qbm
