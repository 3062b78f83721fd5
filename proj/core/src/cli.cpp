#include "qbm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qbm/classical.hpp"
#include "qbm/correlations.hpp"
#include "qbm/csv.hpp"
#include "qbm/diffusion.hpp"
#include "qbm/noise_corr.hpp"
#include "qbm/oup.hpp"
#include "qbm/susceptibility.hpp"

namespace qbm::cli {

namespace fs = std::filesystem;

std::vector<double> Grid::make() const {
    if (!(t_max > t_min && t_min > 0.0)) throw ConfigError("grid requires t_max > t_min > 0");
    if (n_points < 2) throw ConfigError("grid requires n_points >= 2");
    std::vector<double> ts(n_points);
    if (log_spacing) {
        double a = std::log(t_min), b = std::log(t_max);
        for (int i = 0; i < n_points; ++i)
            ts[i] = std::exp(a + (b - a) * i / (n_points - 1));
    } else {
        for (int i = 0; i < n_points; ++i)
            ts[i] = t_min + (t_max - t_min) * i / (n_points - 1);
    }
    ts.front() = t_min;
    ts.back() = t_max;
    return ts;
}

void RunConfig::validate() const {
    model.validate();
    if (!(grid.t_max > grid.t_min && grid.t_min > 0.0))
        throw ConfigError("grid requires t_max > t_min > 0");
    if (grid.n_points < 2) throw ConfigError("grid requires n_points >= 2");
}

namespace {

struct CommonOpts {
    std::string config_path;
    double gamma = NAN, temperature = NAN, nu = NAN, omega_d = NAN;
    double t_min = NAN, t_max = NAN;
    int points = -1;
    std::string spacing = "linear";
    std::string output = "-";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "flat key=value config file");
    cmd->add_option("--gamma", o.gamma, "scaled friction");
    cmd->add_option("--temperature", o.temperature, "scaled temperature");
    cmd->add_option("--nu", o.nu, "scaled first Matsubara frequency");
    cmd->add_option("--omega-d", o.omega_d, "scaled Drude cutoff");
    cmd->add_option("--t-min", o.t_min, "grid start (also the evaluation floor)");
    cmd->add_option("--t-max", o.t_max, "grid end");
    cmd->add_option("--points", o.points, "number of grid points");
    cmd->add_option("--spacing", o.spacing, "linear|log")
        ->check(CLI::IsMember({"linear", "log"}));
    cmd->add_option("-o,--output", o.output, "output CSV path ('-' for stdout)");
}

RunConfig build_config(const CommonOpts& o) {
    RunConfig rc;
    std::map<std::string, std::string> kv;
    if (!o.config_path.empty()) kv = parse_config_file(o.config_path);
    apply_config(rc.model, kv);
    if (kv.count("t_max")) rc.grid.t_max = std::stod(kv.at("t_max"));
    if (kv.count("n_points")) rc.grid.n_points = static_cast<int>(std::stol(kv.at("n_points")));
    if (kv.count("t_min")) rc.grid.t_min = std::stod(kv.at("t_min"));

    if (!std::isnan(o.gamma)) rc.model.gamma = o.gamma;
    if (!std::isnan(o.temperature)) rc.model.temperature = o.temperature;
    if (!std::isnan(o.nu)) {
        rc.model.nu = o.nu;
        if (std::isnan(o.omega_d)) rc.model.omega_d = 10.0 * o.nu;
    }
    if (!std::isnan(o.omega_d)) rc.model.omega_d = o.omega_d;
    if (!std::isnan(o.t_min)) {
        rc.grid.t_min = o.t_min;
        rc.model.quad.t_min = o.t_min;
    } else {
        rc.grid.t_min = std::max(rc.grid.t_min, rc.model.quad.t_min);
    }
    if (!std::isnan(o.t_max)) rc.grid.t_max = o.t_max;
    if (o.points > 0) rc.grid.n_points = o.points;
    rc.grid.log_spacing = (o.spacing == "log");
    rc.output_path = o.output;
    try {
        rc.model.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    rc.validate();
    return rc;
}

void emit(const std::string& path, const CsvTable& table) {
    if (path == "-") {
        for (const auto& c : table.comments) std::cout << "# " << c << "\n";
        for (std::size_t i = 0; i < table.header.size(); ++i)
            std::cout << (i ? "," : "") << table.header[i];
        std::cout << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                std::cout << (i ? "," : "") << format_full(row[i]);
            std::cout << "\n";
        }
        return;
    }
    write_csv(path, table);
}

CsvTable correlation_table(const RunConfig& rc) {
    CsvTable t;
    t.header = {"t", "S", "A", "dS", "dA", "d2S", "d2A"};
    for (double x : rc.grid.make()) {
        auto c = eval_correlation(x, rc.model, x >= rc.model.quad.t_min);
        t.rows.push_back({x, c.S, c.A, c.dS, c.dA, c.d2S, c.d2A});
    }
    return t;
}

CsvTable susceptibility_table(const RunConfig& rc) {
    CsvTable t;
    t.header = {"t", "chi_q", "chi_v", "dchi_q", "dchi_v", "omega_drift"};
    auto poles = find_chi_q_zeros(rc.model, rc.grid.t_max);
    for (double tp : poles.times) t.comments.push_back("pole t=" + format_full(tp));
    for (double x : rc.grid.make()) {
        auto v = eval_susceptibility(x, rc.model);
        double omega = poles.in_guard(x) ? NAN : v.dchi_q / v.chi_q;
        t.rows.push_back({x, v.chi_q, v.chi_v, v.dchi_q, v.dchi_v, omega});
    }
    return t;
}

CsvTable diffusion_table(const RunConfig& rc, CoefficientSeries* series_out = nullptr) {
    CsvTable t;
    t.header = {"t",        "omega_drift", "sigma_re", "sigma_im",
                "sigma_total", "d1_total", "dq_total", "flags"};
    auto series = coefficient_series(rc.model, rc.grid.make());
    for (auto [a, b] : series.pole_windows)
        t.comments.push_back("pole t=" + format_full(0.5 * (a + b)));
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        t.rows.push_back({series.times[i], series.omega_drift[i], series.sigma_q[i].re,
                          series.sigma_q[i].im, series.sigma_q[i].total, series.d1[i].total,
                          series.d_q[i].total, static_cast<double>(series.flags[i])});
    }
    if (series_out) *series_out = std::move(series);
    return t;
}

CsvTable classical_table(const RunConfig& rc) {
    CsvTable t;
    t.header = {"t", "d_clas", "sigma_clas"};
    ClassicalParams cp{rc.model.gamma, rc.model.temperature};
    auto poles = find_chi_q_zeros(rc.model, rc.grid.t_max);
    for (double tp : poles.times) t.comments.push_back("pole t=" + format_full(tp));
    for (double x : rc.grid.make())
        t.rows.push_back({x, d_clas(x, cp), sigma_clas(x, cp)});
    return t;
}

// ---- presets ---------------------------------------------------------------

struct PresetFile {
    std::string name;
    CsvTable table;
};

RunConfig fig_quantum_config(double gamma) {
    RunConfig rc;
    rc.model.gamma = gamma;
    rc.model.temperature = 0.053;
    rc.model.nu = 1e7;
    rc.model.omega_d = 1e8;
    rc.grid = {1e-3, 10.0, 500, false};
    return rc;
}

std::string gamma_tag(double g) {
    std::string s = std::to_string(g);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    for (auto& ch : s)
        if (ch == '.') ch = 'p';
    return s;
}

std::vector<PresetFile> make_preset(const std::string& id) {
    std::vector<PresetFile> files;
    if (id == "fig1") {
        for (double g : {1.0, 2.0, 4.0}) {
            RunConfig rc = fig_quantum_config(g);
            CsvTable full = correlation_table(rc);
            CsvTable t;
            t.header = {"t", "S", "A"};
            for (const auto& row : full.rows) t.rows.push_back({row[0], row[1], row[2]});
            files.push_back({"fig1_gamma" + gamma_tag(g) + ".csv", std::move(t)});
        }
    } else if (id == "fig2" || id == "fig3") {
        for (double g : {1.0, 2.0, 4.0}) {
            RunConfig rc = fig_quantum_config(g);
            CsvTable full = diffusion_table(rc);
            CsvTable t;
            if (id == "fig2") {
                t.header = {"t", "sigma_re", "sigma_im", "sigma_total"};
                for (const auto& row : full.rows)
                    t.rows.push_back({row[0], row[2], row[3], row[4]});
            } else {
                t.comments = full.comments;
                t.header = {"t", "dq_total", "flags"};
                for (const auto& row : full.rows)
                    t.rows.push_back({row[0], row[6], row[7]});
            }
            files.push_back({id + "_gamma" + gamma_tag(g) + ".csv", std::move(t)});
        }
        if (id == "fig3") {  // inset: Omega(t) for gamma = 1
            RunConfig rc = fig_quantum_config(1.0);
            CsvTable full = susceptibility_table(rc);
            CsvTable t;
            t.comments = full.comments;
            t.header = {"t", "omega_drift"};
            for (const auto& row : full.rows) t.rows.push_back({row[0], row[5]});
            files.push_back({"fig3_omega_gamma1.csv", std::move(t)});
        }
    } else if (id == "fig4" || id == "fig5") {
        for (double g : {200.0, 250.0, 318.0, 400.0}) {
            RunConfig rc;
            rc.model.gamma = g;
            rc.model.temperature = 25.2;
            rc.grid = {1e-3, id == "fig4" ? 2000.0 : 10.0, 500, false};
            files.push_back({id + "_gamma" + gamma_tag(g) + ".csv", classical_table(rc)});
        }
        for (double g : {0.5, 1.0, 2.0, 4.0}) {  // inset set
            RunConfig rc;
            rc.model.gamma = g;
            rc.model.temperature = 2.0;
            rc.grid = {1e-3, 10.0, 500, false};
            files.push_back({id + "_inset_gamma" + gamma_tag(g) + ".csv", classical_table(rc)});
        }
        if (id == "fig5") {  // inset: Omega(t) for imaginary omega
            RunConfig rc;
            rc.model.gamma = 0.5;
            rc.model.temperature = 2.0;
            rc.grid = {1e-3, 10.0, 500, false};
            CsvTable full = susceptibility_table(rc);
            CsvTable t;
            t.comments = full.comments;
            t.header = {"t", "omega_drift"};
            for (const auto& row : full.rows) t.rows.push_back({row[0], row[5]});
            files.push_back({"fig5_omega_gamma0p5.csv", std::move(t)});
        }
    } else {
        throw ConfigError("unknown preset '" + id + "' (expected fig1..fig5)");
    }
    return files;
}

}  // namespace

std::string emit_plot_script(const std::vector<std::string>& csv_paths, const std::string& style) {
    if (csv_paths.empty()) throw ConfigError("plot-script: no CSV files given");
    for (const auto& p : csv_paths)
        if (!fs::exists(p)) throw ConfigError("plot-script: missing file " + p);

    std::ostringstream os;
    os << "# gnuplot script (" << style << " layout)\n";
    os << "set datafile separator ','\n";
    os << "set datafile commentschars '#'\n";
    os << "set key autotitle columnhead\n";
    auto plot_list = [&](const std::string& using_expr, std::size_t from, std::size_t to) {
        std::string s = "plot ";
        for (std::size_t i = from; i < to && i < csv_paths.size(); ++i) {
            if (i > from) s += ", ";
            s += "'" + csv_paths[i] + "' using " + using_expr + " with lines";
        }
        return s + "\n";
    };
    if (style == "fig1") {
        // two-panel real/imaginary layout
        os << "set multiplot layout 2,1\n";
        os << "set ylabel 'Re <q(t)q0>'\n" << plot_list("1:2", 0, csv_paths.size());
        os << "set ylabel 'Im <q(t)q0>'\n" << plot_list("1:3", 0, csv_paths.size());
        os << "unset multiplot\n";
    } else if (style == "fig2") {
        os << "set ylabel 'sigma_Q(t)'\n" << plot_list("1:4", 0, csv_paths.size());
    } else if (style == "fig3") {
        // last file is the Omega(t) inset data
        std::size_t main_n = csv_paths.size() > 1 ? csv_paths.size() - 1 : csv_paths.size();
        os << "set multiplot\n";
        os << "set ylabel 'D_Q(t)'\n" << plot_list("1:2", 0, main_n);
        if (csv_paths.size() > 1) {
            os << "set origin 0.55,0.55\nset size 0.4,0.4\n";
            os << "set ylabel 'Omega(t)'\n" << plot_list("1:2", main_n, csv_paths.size());
        }
        os << "unset multiplot\n";
    } else if (style == "fig4" || style == "fig5") {
        int col = (style == "fig4") ? 3 : 2;  // sigma_clas : d_clas
        std::size_t main_n = std::min<std::size_t>(4, csv_paths.size());
        os << "set multiplot\n";
        os << "set ylabel '" << (style == "fig4" ? "sigma_clas(t)" : "D_clas(t)") << "'\n"
           << plot_list("1:" + std::to_string(col), 0, main_n);
        if (csv_paths.size() > main_n) {
            os << "set origin 0.55,0.2\nset size 0.4,0.4\n";
            os << plot_list("1:" + std::to_string(col), main_n, csv_paths.size());
        }
        os << "unset multiplot\n";
    } else {
        throw ConfigError("plot-script: unknown style '" + style + "'");
    }
    return os.str();
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Fokker-Planck coefficients of a harmonically trapped Brownian particle in a "
                 "thermal oscillator bath: drift frequency, generalized diffusion, standard "
                 "deviation, classical limits, and an Ornstein-Uhlenbeck cross-check"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    CommonOpts o_corr, o_sus, o_diff, o_clas, o_sim, o_phi;

    auto* c_corr = app.add_subcommand("correlation", "position correlation <q(t)q0> and derivatives");
    add_common(c_corr, o_corr);

    auto* c_sus = app.add_subcommand("susceptibility", "chi_q, chi_v, derivatives and drift frequency");
    add_common(c_sus, o_sus);

    auto* c_diff = app.add_subcommand("diffusion", "Omega, sigma_Q, D1, D_Q coefficient series");
    add_common(c_diff, o_diff);

    auto* c_clas = app.add_subcommand("classical", "classical Markovian D_clas and sigma_clas");
    add_common(c_clas, o_clas);

    auto* c_sim = app.add_subcommand("simulate", "Ornstein-Uhlenbeck ensemble cross-validation");
    add_common(c_sim, o_sim);
    long sim_paths = 100000;
    double sim_dt = 1e-3;
    std::uint64_t sim_seed = 12345;
    std::string sim_source = "classical";
    c_sim->add_option("--paths", sim_paths, "number of ensemble paths");
    c_sim->add_option("--dt", sim_dt, "Euler-Maruyama step");
    c_sim->add_option("--seed", sim_seed, "root seed");
    c_sim->add_option("--source", sim_source, "coefficient source")
        ->check(CLI::IsMember({"classical", "quantum"}));

    auto* c_preset = app.add_subcommand("preset", "write the CSV bundle for a named figure preset");
    std::string preset_id;
    std::string preset_dir = ".";
    c_preset->add_option("id", preset_id, "fig1..fig5")->required();
    c_preset->add_option("--out-dir", preset_dir, "output directory");

    auto* c_plot = app.add_subcommand("plot-script", "emit a gnuplot script for preset CSVs");
    std::string plot_style;
    std::string plot_out = "-";
    std::vector<std::string> plot_csvs;
    c_plot->add_option("--style", plot_style, "fig1..fig5")->required();
    c_plot->add_option("csvs", plot_csvs, "CSV files in plotting order");
    c_plot->add_option("-o,--output", plot_out, "script output path ('-' for stdout)");

    auto* c_phi = app.add_subcommand("debug-phi", "two-time noise correlation <phi_v(t)phi_v(s)>");
    add_common(c_phi, o_phi);
    double phi_s = 0.5;
    c_phi->add_option("--s", phi_s, "second time argument");
    c_phi->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (c_corr->parsed()) {
            auto rc = build_config(o_corr);
            emit(rc.output_path, correlation_table(rc));
        } else if (c_sus->parsed()) {
            auto rc = build_config(o_sus);
            emit(rc.output_path, susceptibility_table(rc));
        } else if (c_diff->parsed()) {
            auto rc = build_config(o_diff);
            emit(rc.output_path, diffusion_table(rc));
        } else if (c_clas->parsed()) {
            auto rc = build_config(o_clas);
            emit(rc.output_path, classical_table(rc));
        } else if (c_sim->parsed()) {
            auto rc = build_config(o_sim);
            CoefficientTable table;
            std::vector<double> ref_times, ref_sigma;
            if (sim_source == "classical") {
                ClassicalParams cp{rc.model.gamma, rc.model.temperature};
                int n = 2001;
                table.times.resize(n);
                table.omega.resize(n);
                table.diffusion.resize(n);
                for (int i = 0; i < n; ++i) {
                    double t = rc.grid.t_max * i / (n - 1);
                    table.times[i] = t;
                    table.omega[i] = drift_frequency(std::max(t, 1e-12), rc.model);
                    table.diffusion[i] = t > 0.0 ? std::max(0.0, d_clas(t, cp)) : 0.0;
                }
            } else {
                auto series = coefficient_series(rc.model, rc.grid.make());
                table.times = series.times;
                table.omega = series.omega_drift;
                for (const auto& v : series.d_q) table.diffusion.push_back(v.total);
                table.pole_windows = series.pole_windows;
            }
            auto stats = simulate_ensemble(table, sim_paths, sim_dt, rc.grid.t_max, sim_seed);
            auto ode = variance_ode(table, stats.times, 0.0);
            CsvTable t;
            t.header = {"t", "mc_variance", "mc_stderr", "ode_variance", "reference_sigma"};
            ClassicalParams cp{rc.model.gamma, rc.model.temperature};
            for (std::size_t i = 0; i < stats.times.size(); ++i) {
                double ref = sim_source == "classical" ? sigma_clas(stats.times[i], cp) : NAN;
                t.rows.push_back(
                    {stats.times[i], stats.variance[i], stats.std_error[i], ode[i], ref});
            }
            emit(rc.output_path, t);
        } else if (c_preset->parsed()) {
            fs::create_directories(preset_dir);
            for (auto& f : make_preset(preset_id)) {
                write_csv((fs::path(preset_dir) / f.name).string(), f.table);
                std::cout << (fs::path(preset_dir) / f.name).string() << "\n";
            }
        } else if (c_plot->parsed()) {
            std::string script = emit_plot_script(plot_csvs, plot_style);
            if (plot_out == "-") {
                std::cout << script;
            } else {
                std::ofstream out(plot_out);
                if (!out) throw ConfigError("cannot write " + plot_out);
                out << script;
            }
        } else if (c_phi->parsed()) {
            auto rc = build_config(o_phi);
            NoiseKernel kernel(rc.model);
            CsvTable t;
            t.header = {"t", "s", "re", "im"};
            for (double x : rc.grid.make()) {
                auto v = kernel.phi_phi(x, phi_s);
                t.rows.push_back({x, phi_s, v.value.re, v.value.im});
            }
            emit(rc.output_path, t);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what()
                  << " (achieved tolerance " << e.achieved_tolerance << ")\n";
        return kExitNumeric;
    } catch (const PoleError& e) {
        std::cerr << "error: " << e.what() << " (pole at t=" << e.pole_time << ")\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace qbm::cli
