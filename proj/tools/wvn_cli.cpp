// wvn: exceptional sets, recursion identity checks, Pruefer simulation, the
// explicit embedded-eigenvalue construction, divisor-sum profiles and the
// Hausdorff dimension bound, driven by JSON configs.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wvn/eigen_construct.hpp"
#include "wvn/errors.hpp"
#include "wvn/exceptional_set.hpp"
#include "wvn/identity_suite.hpp"
#include "wvn/infinite_type.hpp"
#include "wvn/json_io.hpp"
#include "wvn/operator_data.hpp"
#include "wvn/prufer.hpp"
#include "wvn/recursion.hpp"
#include "wvn/version.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;

struct global_options {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string precision = "double";
    std::string out;
    bool quiet = false;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(const std::string& s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(s)));
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// Emitted alongside every file output; the hash is stable across runs for
// identical resolved configs.
void write_manifest(const std::string& dir_or_file, const std::string& subcommand,
                    const json& resolved, const std::vector<std::string>& outputs,
                    double wall_time_s, bool directory) {
    json m{{"subcommand", subcommand},
           {"config_hash", hash_hex(subcommand + resolved.dump())},
           {"version", wvn::version},
           {"wall_time_s", wall_time_s},
           {"outputs", outputs}};
    const std::string path = directory
                                 ? (std::filesystem::path(dir_or_file) / "manifest.json").string()
                                 : dir_or_file + ".manifest.json";
    write_text(path, m.dump(2) + "\n");
}

std::string csv_of(const wvn::prufer_trajectory& t) {
    std::string s = "x,theta,log_r\n";
    char line[128];
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", t.x[i], t.theta[i], t.log_r[i]);
        s += line;
    }
    return s;
}

std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    return out;
}

// "lo:hi:count" linear grid, or a comma-separated list
std::vector<double> parse_grid(const std::string& spec) {
    if (spec.find(':') == std::string::npos) return parse_list(spec);
    double lo = 0, hi = 0;
    int count = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw CLI::ValidationError("--eta-grid", "expected lo:hi:count or a comma list");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return out;
}

void emit(const global_options& g, const std::string& subcommand, const json& resolved,
          const std::string& payload, double wall_s) {
    if (g.out.empty()) {
        std::cout << payload;
        return;
    }
    write_text(g.out, payload);
    write_manifest(g.out, subcommand, resolved, {g.out}, wall_s, false);
}

json identity_report_json(const wvn::identity_report& rep, const std::string& precision) {
    return json{{"max_I", rep.max_i},
                {"trials", rep.trials},
                {"seed", rep.seed},
                {"precision", precision},
                {"max_reduction_f", rep.max_reduction_f},
                {"max_reduction_g", rep.max_reduction_g},
                {"max_imaginary", rep.max_imaginary},
                {"max_swap", rep.max_swap},
                {"max_gh", rep.max_gh},
                {"max_dyck", rep.max_dyck},
                {"dyck_counts_ok", rep.dyck_counts_ok},
                {"resampled", rep.resampled},
                {"pass", rep.pass()}};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wigner-von Neumann type Dirac operator toolkit"};
    app.require_subcommand(1);

    global_options g;
    app.add_option("--seed", g.seed, "seed for randomized checks");
    app.add_option("--threads", g.threads, "OpenMP thread count (0 = runtime default)");
    app.add_option("--precision", g.precision, "double or extended")
        ->check(CLI::IsMember({"double", "extended"}));
    app.add_option("--out", g.out, "output path (default: stdout)");
    app.add_flag("--quiet", g.quiet, "suppress progress notes");

    int exit_code = 0;
    const auto t0 = std::chrono::steady_clock::now();
    auto wall = [&t0] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };
    auto setup = [&g] {
#ifdef _OPENMP
        if (g.threads > 0) omp_set_num_threads(g.threads);
#endif
    };

    // --- validate ---
    auto* cmd_validate = app.add_subcommand("validate", "validate an operator-data config");
    static std::string cfg_path;
    cmd_validate->add_option("--config", cfg_path, "operator data JSON")->required();
    cmd_validate->fallthrough();
    cmd_validate->callback([&] {
        setup();
        const auto data = wvn::load_operator_data(cfg_path);
        const auto rep = wvn::validate(data);
        const json resolved{{"config", cfg_path}};
        emit(g, "validate", resolved, wvn::to_json(rep).dump(2) + "\n", wall());
        if (!rep.ok()) exit_code = 1;
    });

    // --- sp ---
    auto* cmd_sp = app.add_subcommand("sp", "build the exceptional set S_p");
    static std::string sp_phi;
    static int sp_p = 5;
    static std::size_t sp_cap = 10'000'000;
    cmd_sp->add_option("--phi", sp_phi, "comma-separated frequencies")->required();
    cmd_sp->add_option("--p", sp_p, "odd p >= 3")->required();
    cmd_sp->add_option("--cap", sp_cap, "enumeration cap");
    cmd_sp->fallthrough();
    cmd_sp->callback([&] {
        setup();
        const auto phi = parse_list(sp_phi);
        const auto set = wvn::build_sp(phi, sp_p, sp_cap);
        const json resolved{{"phi", phi}, {"p", sp_p}, {"cap", sp_cap}};
        emit(g, "sp", resolved, wvn::to_json(set).dump(2) + "\n", wall());
    });

    // --- dimension ---
    auto* cmd_dim = app.add_subcommand("dimension", "Hausdorff dimension bound (p-2)*alpha");
    static int dim_p = 5;
    static double dim_alpha = 0.2;
    cmd_dim->add_option("--p", dim_p, "odd p >= 3")->required();
    cmd_dim->add_option("--alpha", dim_alpha, "alpha in (0, 1/(p-2))")->required();
    cmd_dim->fallthrough();
    cmd_dim->callback([&] {
        setup();
        const double bound = wvn::hausdorff_bound(dim_p, dim_alpha);
        const bool informative = bound < 1.0 - 1e-12;
        std::string line = json(bound).dump();
        if (!informative) line += " (non-informative: bound reaches 1)";
        line += "\n";
        if (g.out.empty()) {
            std::cout << line;
        } else {
            const json resolved{{"p", dim_p}, {"alpha", dim_alpha}};
            const json payload{{"p", dim_p}, {"alpha", dim_alpha}, {"bound", bound}, {"informative", informative}};
            write_text(g.out, payload.dump(2) + "\n");
            write_manifest(g.out, "dimension", resolved, {g.out}, wall(), false);
        }
    });

    // --- simulate ---
    auto* cmd_sim = app.add_subcommand("simulate", "integrate the Pruefer equations");
    static std::string sim_cfg;
    static double sim_eta = 0, sim_theta0 = 0, sim_xmax = 1000, sim_rel = 1e-9, sim_xstart = 1.0;
    static int sim_samples = 600;
    cmd_sim->add_option("--config", sim_cfg, "operator data JSON")->required();
    cmd_sim->add_option("--eta", sim_eta, "spectral parameter eta = 2E")->required();
    cmd_sim->add_option("--theta0", sim_theta0, "Pruefer angle at x_start");
    cmd_sim->add_option("--xmax", sim_xmax, "right endpoint");
    cmd_sim->add_option("--xstart", sim_xstart, "left endpoint (default 1)");
    cmd_sim->add_option("--rel-tol", sim_rel, "relative tolerance");
    cmd_sim->add_option("--samples", sim_samples, "output sample count");
    cmd_sim->fallthrough();
    cmd_sim->callback([&] {
        setup();
        const auto data = wvn::load_operator_data(sim_cfg);
        const auto rep = wvn::validate(data);
        if (!rep.ok()) {
            for (const auto& v : rep.violations) std::cerr << "violation: " << v << "\n";
            exit_code = 1;
            return;
        }
        wvn::solve_config cfg;
        cfg.x_start = sim_xstart;
        cfg.x_max = sim_xmax;
        cfg.rel_tol = sim_rel;
        cfg.sample_count = sim_samples;
        const auto traj = wvn::integrate_prufer(data, sim_eta,
                                                wvn::boundary_condition::from_theta0(sim_theta0), cfg);
        const json resolved{{"config", sim_cfg}, {"eta", sim_eta},     {"theta0", sim_theta0},
                            {"xmax", sim_xmax},  {"xstart", sim_xstart}, {"rel_tol", sim_rel},
                            {"samples", sim_samples}};
        emit(g, "simulate", resolved, csv_of(traj), wall());
    });

    // --- example ---
    auto* cmd_ex = app.add_subcommand("example", "explicit embedded-eigenvalue construction");
    static double ex_delta = 1.0 / 3.0, ex_xmax = 10'000;
    static std::string ex_amods = "1,1", ex_branch = "both", ex_freqs;
    static int ex_samples = 800;
    cmd_ex->add_option("--delta", ex_delta, "envelope exponent in (1/5, 1/3]");
    cmd_ex->add_option("--amods", ex_amods, "a_mod,b_mod amplitude moduli");
    cmd_ex->add_option("--branch", ex_branch, "decay, growth or both")
        ->check(CLI::IsMember({"decay", "growth", "both"}));
    cmd_ex->add_option("--xmax", ex_xmax, "right endpoint");
    cmd_ex->add_option("--samples", ex_samples, "output sample count");
    cmd_ex->add_option("--freqs", ex_freqs, "phi,psi,rho (default sqrt5, 2*sqrt3-sqrt5-1, sqrt3)");
    cmd_ex->fallthrough();
    cmd_ex->callback([&] {
        setup();
        if (g.out.empty()) throw CLI::ValidationError("--out", "example requires an output directory");
        std::filesystem::create_directories(g.out);

        double f_phi = std::sqrt(5.0);
        double f_rho = std::sqrt(3.0);
        double f_psi = 2 * std::sqrt(3.0) - std::sqrt(5.0) - 1.0;
        if (!ex_freqs.empty()) {
            const auto fr = parse_list(ex_freqs);
            if (fr.size() != 3) throw CLI::ValidationError("--freqs", "expected phi,psi,rho");
            f_phi = fr[0];
            f_psi = fr[1];
            f_rho = fr[2];
        }
        const auto am = parse_list(ex_amods);
        if (am.size() != 2) throw CLI::ValidationError("--amods", "expected a_mod,b_mod");

        const auto spec = wvn::solve_coefficients(f_phi, f_psi, f_rho, am[0], am[1], ex_delta);
        wvn::solve_config cfg;
        cfg.x_max = ex_xmax;
        cfg.sample_count = ex_samples;

        const json resolved{{"delta", ex_delta},   {"amods", am},      {"branch", ex_branch},
                            {"xmax", ex_xmax},     {"samples", ex_samples},
                            {"freqs", {f_phi, f_psi, f_rho}}};
        std::vector<std::string> outputs;

        const json spec_json{{"phi", spec.phi},
                             {"psi", spec.psi},
                             {"rho", spec.rho},
                             {"a", {spec.a.real(), spec.a.imag()}},
                             {"b", {spec.b.real(), spec.b.imag()}},
                             {"c", {spec.c.real(), spec.c.imag()}},
                             {"delta", spec.delta},
                             {"p", spec.p},
                             {"eta", spec.eta},
                             {"E", spec.energy},
                             {"lambda", {spec.lambda.real(), spec.lambda.imag()}},
                             {"target_phase", spec.target_phase}};
        const auto spec_path = (std::filesystem::path(g.out) / "spec.json").string();
        write_text(spec_path, spec_json.dump(2) + "\n");
        outputs.push_back(spec_path);

        json fit = json::object();
        auto run_branch = [&](wvn::example_branch br, const std::string& name) {
            const auto run = wvn::run_example(spec, cfg, br);
            const auto csv_path = (std::filesystem::path(g.out) / (name + ".csv")).string();
            write_text(csv_path, csv_of(run.build.trajectory));
            outputs.push_back(csv_path);
            fit[name] = json{{"predicted_B", run.predicted.B},
                             {"fitted_B", run.fitted_B},
                             {"fitted_slope", run.fitted_slope},
                             {"rel_err", run.rel_err},
                             {"psi_target", run.build.psi_target},
                             {"xi_variation", run.build.xi_variation},
                             {"form", run.predicted.form == wvn::decay_prediction::form_t::power
                                          ? "power"
                                          : "stretched_exponential"}};
        };
        if (ex_branch == "decay" || ex_branch == "both") run_branch(wvn::example_branch::decay, "decay");
        if (ex_branch == "growth" || ex_branch == "both") run_branch(wvn::example_branch::growth, "growth");

        const auto fit_path = (std::filesystem::path(g.out) / "fit_report.json").string();
        write_text(fit_path, fit.dump(2) + "\n");
        outputs.push_back(fit_path);
        write_manifest(g.out, "example", resolved, outputs, wall(), true);
        if (!g.quiet) std::cerr << "example outputs written to " << g.out << "\n";
    });

    // --- recursion-check ---
    auto* cmd_rc = app.add_subcommand("recursion-check", "randomized recursion identity suite");
    static int rc_max_i = 5, rc_trials = 100;
    cmd_rc->add_option("--max-I", rc_max_i, "largest order I (<= 9)");
    cmd_rc->add_option("--trials", rc_trials, "seeded trials");
    cmd_rc->fallthrough();
    cmd_rc->callback([&] {
        setup();
        if (rc_max_i > 9) throw CLI::ValidationError("--max-I", "must be at most 9");
        const auto rep = g.precision == "extended"
                             ? wvn::run_identity_suite_extended(rc_max_i, rc_trials, g.seed)
                             : wvn::run_identity_suite(rc_max_i, rc_trials, g.seed);
        const json resolved{{"max_I", rc_max_i}, {"trials", rc_trials}, {"seed", g.seed},
                            {"precision", g.precision}};
        emit(g, "recursion-check", resolved, identity_report_json(rep, g.precision).dump(2) + "\n",
             wall());
        if (!rep.pass()) exit_code = 2;
    });

    // --- divisors ---
    auto* cmd_div = app.add_subcommand("divisors", "small-divisor sum profile over an eta grid");
    static std::string div_cfg, div_grid;
    static std::size_t div_trunc = 8, div_cap = 10'000'000;
    cmd_div->add_option("--config", div_cfg, "operator data JSON")->required();
    cmd_div->add_option("--eta-grid", div_grid, "lo:hi:count or comma list")->required();
    cmd_div->add_option("--trunc", div_trunc, "truncation index J")->required();
    cmd_div->add_option("--cap", div_cap, "tuple enumeration cap");
    cmd_div->fallthrough();
    cmd_div->callback([&] {
        setup();
        const auto data = wvn::load_operator_data(div_cfg);
        const auto grid = parse_grid(div_grid);
        const auto entries = wvn::exceptional_profile(data, data.p, grid, div_trunc, div_cap);
        json arr = json::array();
        for (const auto& e : entries) arr.push_back(wvn::to_json(e));
        const json resolved{{"config", div_cfg}, {"eta_grid", div_grid}, {"trunc", div_trunc},
                            {"cap", div_cap}};
        emit(g, "divisors", resolved, arr.dump(2) + "\n", wall());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    } catch (const wvn::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const wvn::validation_error& e) {
        std::cerr << "validation failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    return exit_code;
}
