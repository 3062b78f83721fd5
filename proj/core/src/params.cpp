#include "qbm/params.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace qbm {

void SeriesControl::validate() const {
    if (n_max < 10) throw DomainError("series n_max must be >= 10");
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw DomainError("series rel_tol must be in (0,1)");
}

void QuadControl::validate() const {
    if (!(abs_tol > 0.0)) throw DomainError("quad abs_tol must be positive");
    if (!(rel_tol > 0.0)) throw DomainError("quad rel_tol must be positive");
    if (max_depth < 1) throw DomainError("quad max_depth must be >= 1");
    if (!(t_min > 0.0)) throw DomainError("t_min must be positive");
}

void ModelParams::validate() const {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
    if (!(nu > 0.0)) throw DomainError("nu must be positive");
    if (!(omega_d > 0.0)) throw DomainError("omega_d must be positive");
    series.validate();
    quad.validate();
}

std::complex<double> ModelParams::lambda1() const {
    return (gamma + std::sqrt(std::complex<double>(omega_sq()))) / 2.0;
}

std::complex<double> ModelParams::lambda2() const {
    return (gamma - std::sqrt(std::complex<double>(omega_sq()))) / 2.0;
}

Regime classify_regime(double gamma) {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    Regime r;
    double w2 = gamma * gamma - 4.0;
    if (std::abs(gamma - 2.0) <= eps_regime) {
        r.kind = RegimeKind::Aperiodic;
        r.omega = {0.0, 0.0};
        r.omega_tilde = 0.0;
    } else if (gamma < 2.0) {
        r.kind = RegimeKind::Periodic;
        r.omega_tilde = std::sqrt(-w2);
        r.omega = {0.0, r.omega_tilde};
    } else {
        r.kind = RegimeKind::Overdamped;
        r.omega_tilde = std::sqrt(w2);
        r.omega = {r.omega_tilde, 0.0};
    }
    return r;
}

double matsubara(long n, double nu) {
    if (n < 1) throw DomainError("Matsubara index must be >= 1 (sums start at n = 1)");
    if (!(nu > 0.0)) throw DomainError("nu must be positive");
    return static_cast<double>(n) * nu;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "gamma",   "temperature", "nu",    "omega_d", "n_max", "rel_tol", "abs_tol",
        "t_min",   "t_max",       "n_points", "seed", "n_paths", "dt",
    };
    return keys;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + value);
    }
}

long to_long(const std::string& key, const std::string& value) {
    double v = to_double(key, value);
    if (v != std::floor(v)) throw ConfigError("config: '" + key + "' must be an integer");
    return static_cast<long>(v);
}

}  // namespace

void apply_config(ModelParams& params, const std::map<std::string, std::string>& kv) {
    bool omega_d_given = false;
    for (const auto& [key, value] : kv) {
        if (key == "gamma") params.gamma = to_double(key, value);
        else if (key == "temperature") params.temperature = to_double(key, value);
        else if (key == "nu") params.nu = to_double(key, value);
        else if (key == "omega_d") { params.omega_d = to_double(key, value); omega_d_given = true; }
        else if (key == "n_max") params.series.n_max = to_long(key, value);
        else if (key == "rel_tol") params.series.rel_tol = to_double(key, value);
        else if (key == "abs_tol") params.quad.abs_tol = to_double(key, value);
        else if (key == "t_min") params.quad.t_min = to_double(key, value);
        // t_max, n_points, seed, n_paths, dt are run-level keys handled by the CLI
    }
    if (!omega_d_given && kv.count("nu")) params.omega_d = 10.0 * params.nu;
    try {
        params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

}  // namespace qbm
