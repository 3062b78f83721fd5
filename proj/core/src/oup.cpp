#include "qbm/oup.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parallel.hpp"

namespace qbm {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (xs.empty()) throw DomainError("coefficient table is empty");
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

// splitmix64: path-index mixing into per-path engine seeds
std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t path_seed(std::uint64_t root, long path) {
    std::uint64_t s = root ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(path + 1));
    std::uint64_t a = splitmix64(s);
    return splitmix64(s) ^ a;
}

}  // namespace

double CoefficientTable::omega_at(double t) const { return interp(times, omega, t); }
double CoefficientTable::diffusion_at(double t) const { return interp(times, diffusion, t); }

double CoefficientTable::min_diffusion(double t_max) const {
    double m = INFINITY;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] > t_max) break;
        m = std::min(m, diffusion[i]);
    }
    return m;
}

bool CoefficientTable::crosses_pole(double t0, double t1) const {
    for (auto [a, b] : pole_windows)
        if (t0 <= b && t1 >= a) return true;
    return false;
}

EnsembleStats simulate_ensemble(const CoefficientTable& coeffs, long n_paths, double dt,
                                double t_max, std::uint64_t seed, int max_outputs) {
    if (n_paths < 2) throw DomainError("simulate_ensemble requires n_paths >= 2");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    double dmin = coeffs.min_diffusion(t_max);
    if (dmin < 0.0)
        throw DomainError("simulate_ensemble: D(t) < 0 on the window (min " +
                          std::to_string(dmin) + "); sqrt(D) undefined, restrict to D >= 0");

    const long n_steps = static_cast<long>(std::llround(t_max / dt));
    const long stride = std::max(1L, n_steps / std::max(1, max_outputs - 1));
    std::vector<long> out_steps;
    for (long k = stride; k <= n_steps; k += stride) out_steps.push_back(k);
    const std::size_t n_out = out_steps.size();

    // precomputed per-step coefficients (shared, read-only)
    std::vector<double> drift(n_steps), noise(n_steps);
    for (long k = 0; k < n_steps; ++k) {
        // dq = Omega(t) q dt + sqrt(D dt) N(0,1); Omega = chi_q'/chi_q < 0 damps.
        // Coefficients are sampled at the step midpoint, which removes the
        // dominant O(dt) bias of the variance recursion.
        double t = (static_cast<double>(k) + 0.5) * dt;
        drift[k] = 1.0 + coeffs.omega_at(t) * dt;
        noise[k] = std::sqrt(std::max(0.0, coeffs.diffusion_at(t)) * dt);
    }

    // fixed-size path chunks reduced in chunk order: bitwise deterministic
    // for any thread count
    constexpr long kChunk = 1024;
    const long n_chunks = (n_paths + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> chunk_sum(n_chunks), chunk_sumsq(n_chunks);

    detail::parallel_for(n_chunks, [&](long c) {
        std::vector<double> sum(n_out, 0.0), sumsq(n_out, 0.0);
        long lo = c * kChunk, hi = std::min(n_paths, lo + kChunk);
        for (long path = lo; path < hi; ++path) {
            std::mt19937_64 eng(path_seed(seed, path));
            std::normal_distribution<double> gauss(0.0, 1.0);
            double q = 0.0;
            std::size_t oi = 0;
            for (long k = 0; k < n_steps; ++k) {
                q = q * drift[k] + noise[k] * gauss(eng);
                if (oi < n_out && k + 1 == out_steps[oi]) {
                    sum[oi] += q;
                    sumsq[oi] += q * q;
                    ++oi;
                }
            }
        }
        chunk_sum[c] = std::move(sum);
        chunk_sumsq[c] = std::move(sumsq);
    });

    EnsembleStats stats;
    stats.n_paths = n_paths;
    stats.seed = seed;
    stats.times.resize(n_out);
    stats.mean.resize(n_out);
    stats.variance.resize(n_out);
    stats.std_error.resize(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        double sum = 0.0, sumsq = 0.0;
        for (long c = 0; c < n_chunks; ++c) {  // fixed order
            sum += chunk_sum[c][i];
            sumsq += chunk_sumsq[c][i];
        }
        double n = static_cast<double>(n_paths);
        double mean = sum / n;
        double var = (sumsq - n * mean * mean) / (n - 1.0);
        stats.times[i] = static_cast<double>(out_steps[i]) * dt;
        stats.mean[i] = mean;
        stats.variance[i] = std::max(0.0, var);
        stats.std_error[i] = stats.variance[i] * std::sqrt(2.0 / (n - 1.0));
    }
    return stats;
}

std::vector<double> variance_ode(const CoefficientTable& coeffs, const std::vector<double>& t_grid,
                                 double sigma0) {
    if (t_grid.empty()) return {};
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1]) throw DomainError("variance_ode: grid must be ascending");

    auto rhs = [&](double t, double s) {
        return coeffs.diffusion_at(t) + 2.0 * coeffs.omega_at(t) * s;
    };

    std::vector<double> out(t_grid.size());
    double sigma = sigma0;
    double t = t_grid.front();
    out[0] = sigma;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        double t1 = t_grid[i];
        if (coeffs.crosses_pole(t, t1))
            throw PoleError("variance_ode: step crosses a pole window", t1);
        // substep so that h resolves the coefficient table
        int nsub = std::max(1, static_cast<int>(std::ceil((t1 - t) / 1e-2)));
        double h = (t1 - t) / nsub;
        for (int k = 0; k < nsub; ++k) {
            double tk = t + k * h;
            double k1 = rhs(tk, sigma);
            double k2 = rhs(tk + 0.5 * h, sigma + 0.5 * h * k1);
            double k3 = rhs(tk + 0.5 * h, sigma + 0.5 * h * k2);
            double k4 = rhs(tk + h, sigma + h * k3);
            sigma += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out[i] = sigma;
        t = t1;
    }
    return out;
}

}  // namespace qbm
