#include "qbm/noise_corr.hpp"

#include <cmath>
#include <mutex>

namespace qbm {

namespace {

// memo key: time quantized to 1e-12 for reproducible cache hits
std::int64_t quantize(double t) { return static_cast<std::int64_t>(std::llround(t * 1e12)); }

}  // namespace

NoiseKernel::NoiseKernel(const ModelParams& params) : params_(params) {
    params_.validate();
    disp_ = dispersions(params_);
}

const CorrSample& NoiseKernel::corr(double t) const {
    std::int64_t key = quantize(t);
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return *it->second;
    }
    auto sample = std::make_unique<CorrSample>(eval_correlation(t, params_, true));
    std::unique_lock lock(mutex_);
    auto [it, inserted] = cache_.try_emplace(key, std::move(sample));
    return *it->second;
}

std::size_t NoiseKernel::cache_size() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

ComplexSample NoiseKernel::phi_q0(double t) const {
    if (t < params_.quad.t_min) throw DomainError("phi_q0 requires t >= t_min");
    auto sus = eval_susceptibility(t, params_);
    const CorrSample& c = corr(t);
    return {c.dS - sus.dchi_v * disp_.v0q0.re - sus.dchi_q * disp_.q0_sq,
            c.dA - sus.dchi_v * disp_.v0q0.im};
}

TwoTimeSample NoiseKernel::phi_phi(double t, double s) const {
    const double t_min = params_.quad.t_min;
    if (t < t_min || s < t_min) throw DomainError("phi_phi requires t, s >= t_min");

    TwoTimeSample out;
    out.t = t;
    out.s = s;

    double tau = t - s;
    double parity = 1.0;
    if (tau < 0.0) {
        tau = -tau;
        parity = -1.0;  // S even, A odd in the time difference
    }
    if (tau < t_min) {
        tau = t_min;
        out.clamped = true;
    }

    auto sus_t = eval_susceptibility(t, params_);
    auto sus_s = eval_susceptibility(s, params_);
    const CorrSample& c_tau = corr(tau);
    const CorrSample& c_t = corr(t);
    const CorrSample& c_s = corr(s);

    // <v(u)v0> = -(S'' + i A''),  <v(u)q0> = S' + i A'
    double vv_tau_re = -c_tau.d2S;
    double vv_tau_im = -parity * c_tau.d2A;
    double vv_t_re = -c_t.d2S, vv_t_im = -c_t.d2A;
    double vv_s_re = -c_s.d2S, vv_s_im = -c_s.d2A;

    double dcv_t = sus_t.dchi_v, dcv_s = sus_s.dchi_v;
    double dcq_t = sus_t.dchi_q, dcq_s = sus_s.dchi_q;
    double cross = dcv_t * dcq_s + dcv_s * dcq_t;

    out.value.re = vv_tau_re - dcv_t * vv_s_re - dcv_s * vv_t_re - dcq_t * c_s.dS -
                   dcq_s * c_t.dS + dcv_t * dcv_s * disp_.v0_sq + cross * disp_.v0q0.re +
                   dcq_t * dcq_s * disp_.q0_sq;
    out.value.im = vv_tau_im - dcv_t * vv_s_im - dcv_s * vv_t_im - dcq_t * c_s.dA -
                   dcq_s * c_t.dA + cross * disp_.v0q0.im;
    return out;
}

}  // namespace qbm
