#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

namespace qbm {

// All quantities are in the reduced units of the model: energy, position and
// time scaled so the trap frequency and particle mass drop out. The library
// performs no unit conversion.

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when a quantity is requested inside the guard window of a pole of
// the drift frequency. Carries the offending pole time.
struct PoleError : std::runtime_error {
    double pole_time;
    PoleError(const std::string& msg, double t_pole)
        : std::runtime_error(msg), pole_time(t_pole) {}
};

// Raised on quadrature / series non-convergence. Carries the tolerance that
// was actually achieved.
struct NumericError : std::runtime_error {
    double achieved_tolerance;
    NumericError(const std::string& msg, double achieved)
        : std::runtime_error(msg), achieved_tolerance(achieved) {}
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SeriesControl {
    long n_max = 200000;     // hard cap on Matsubara terms
    double rel_tol = 1e-10;  // relative tail tolerance

    void validate() const;
};

struct QuadControl {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_depth = 42;
    double t_min = 1e-3;  // smallest evaluation time for derivative-based quantities

    void validate() const;
};

enum class RegimeKind { Periodic, Aperiodic, Overdamped };

// gamma = 2 is the watershed: omega^2 = gamma^2 - 4 changes sign there.
inline constexpr double eps_regime = 1e-9;

struct Regime {
    RegimeKind kind;
    std::complex<double> omega;  // sqrt(gamma^2 - 4); imaginary when periodic
    double omega_tilde;          // |Im omega| (periodic) or Re omega (overdamped); 0 when aperiodic
};

struct ModelParams {
    double gamma = 1.0;        // scaled friction
    double temperature = 1.0;  // scaled T
    double nu = 1e7;           // scaled first Matsubara frequency, 2*pi/(hbar*beta)
    double omega_d = 1e8;      // scaled Drude cutoff; defaults to 10*nu
    SeriesControl series{};
    QuadControl quad{};

    void validate() const;

    double omega_sq() const { return gamma * gamma - 4.0; }
    // lambda_{1,2} = (gamma +- omega)/2, with lambda1*lambda2 = 1.
    std::complex<double> lambda1() const;
    std::complex<double> lambda2() const;
};

Regime classify_regime(double gamma);

// nu_n = n*nu, n >= 1.
double matsubara(long n, double nu);

// Flat key=value config. Recognized keys: gamma, temperature, nu, omega_d,
// n_max, rel_tol, abs_tol, t_min, t_max, n_points, seed, n_paths, dt.
// Unknown keys are rejected. '#' starts a comment.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Applies the model-parameter subset of a parsed config onto params.
void apply_config(ModelParams& params, const std::map<std::string, std::string>& kv);

}  // namespace qbm
