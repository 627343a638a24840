/**
 * @file bousswave.cpp
 * @brief Command-line front end: solitary-wave solves, branch traces, front
 *        scans, and the verification suite.
 *
 * Exit codes: 0 success, 2 configuration error, 3 numerical failure,
 * 4 verification failure.
 */

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bouss/acceptance.hpp"
#include "bouss/analysis.hpp"
#include "bouss/continuation.hpp"
#include "bouss/io.hpp"
#include "bouss/oracle.hpp"
#include "bouss/solver.hpp"

namespace fs = std::filesystem;
using namespace bouss;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitVerification = 4;

struct Options {
    double beta = 1.0;
    std::string branch = "plus";
    double lambda = 1.5;
    double k = 0.5;
    double lambda_max = 0.6;
    double s_max = 0.2;
    double L = 0.0;  // 0 -> family default
    int n = 2048;
    double step = 0.0;
    double max_step = 0.0;
    double gap_tol = 1e-3;
    double stag_tol = 1e-3;
    double blowup_max = 1e6;
    double tail_tol = 1e-8;
    std::string mode = "slow";
    int scan_n = 10000;
    int samples = 100;
    bool verify_flag = false;
    std::string out_dir = "out";
    std::vector<std::string> formats = {"csv", "json"};
};

bool wants(const Options& o, const std::string& f) {
    return std::find(o.formats.begin(), o.formats.end(), f) != o.formats.end();
}

// timestamps stay out of payload files; the sidecar log carries them
void write_sidecar_log(const fs::path& dir, const std::string& command) {
    std::ofstream log(dir / "run.log", std::ios::app);
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%F %T", std::gmtime(&tt));
    log << buf << "Z  " << command << "\n";
}

StepSettings step_settings(const Options& o) {
    StepSettings st;
    st.initial_step = o.step;
    st.max_step = o.max_step;
    st.gap_tol = o.gap_tol;
    st.stag_tol = o.stag_tol;
    st.blowup_max = o.blowup_max;
    st.tail_tol = o.tail_tol;
    return st;
}

void write_profile_outputs(const Options& o, const fs::path& dir, const std::string& stem,
                           const WaveProfile& p) {
    if (wants(o, "csv")) write_profile_csv(dir / (stem + ".csv"), p);
    if (wants(o, "gnuplot-dat")) write_profile_dat(dir / (stem + ".dat"), p);
}

int cmd_stationary(const Options& o) {
    if (!(o.beta > 0.0)) {
        std::cerr << "config error: --beta must be positive\n";
        return kExitConfig;
    }
    Sign branch = o.branch == "minus" ? Sign::Minus : Sign::Plus;
    Grid grid(o.L > 0.0 ? o.L : 30.0 * std::max(o.beta, 1.0), o.n);
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    write_sidecar_log(dir, "stationary");

    WaveProfile exact = stationary_exact(o.beta, branch, grid);
    NewtonSettings ns;
    NewtonResult nr = newton_solve(exact, SlowFamily(o.beta), 0.0, ns);
    if (nr.status != NewtonStatus::Converged) {
        std::cerr << "numerical failure: stationary solve did not converge\n";
        return kExitNumerical;
    }
    write_profile_outputs(o, dir, "stationary", nr.profile);

    double fi_sup = sup_norm(stationary_first_integral(exact, o.beta, 4));
    AppendixReport app = appendix_identities(exact, branch);
    Json j = profile_summary_json(nr.profile);
    j["beta"] = o.beta;
    j["branch"] = branch == Sign::Plus ? "plus" : "minus";
    j["newton_residual"] = nr.residual_sup;
    j["newton_iterations"] = nr.iterations;
    j["sigma_min"] = nr.report.sigma_min;
    j["translation_mode_residual"] = nr.report.translation_mode_residual;
    j["abcd_residual_exact"] = abcd_residual(exact, 4).sup();
    j["first_integral_sup"] = fi_sup;
    j["appendix"] = Json{{"combo_sup", app.combo_sup},
                         {"combo_ode_residual", app.combo_ode_residual},
                         {"kdv_residual", app.kdv_residual}};
    if (o.verify_flag) {
        j["checks"] = Json{{"first_integral_below_1e-7", fi_sup < 1e-7},
                           {"combo_below_1e-12", app.combo_sup < 1e-12}};
    }
    if (wants(o, "json")) write_json(dir / "stationary.json", j);
    std::cout << "stationary wave: u(0) = " << nr.profile.u[0]
              << ", eta(0) = " << nr.profile.eta[0] << ", residual " << nr.residual_sup
              << "\n";
    return kExitOk;
}

int cmd_fast_base(const Options& o) {
    if (!(o.lambda > 1.0)) {
        std::cerr << "config error: --lambda must exceed 1\n";
        return kExitConfig;
    }
    Grid grid = o.L > 0.0 ? Grid(o.L, o.n) : default_fast_grid(o.lambda, o.n);
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    write_sidecar_log(dir, "fast-base");
    WaveProfile p = boussinesq_fast_profile(o.lambda, grid);
    write_profile_outputs(o, dir, "fast_base", p);

    auto d1 = first_derivative(grid, grid.natural_closure(), 4);
    Field up = d1.apply(p.u);
    double ode = 0.0;
    for (int j = 0; j < grid.n; ++j)
        ode = std::max(ode, std::abs(o.lambda * up[j] * up[j] - fast_wave_phi(p.u[j], o.lambda)));
    Json j = profile_summary_json(p);
    j["crest"] = Json{{"u0", p.u[0]},
                      {"lower_bound", fast_crest_lower_bound(o.lambda)},
                      {"upper_bound", o.lambda},
                      {"phi_at_crest", fast_wave_phi(p.u[0], o.lambda)}};
    j["first_integral_sup"] = ode;
    j["decay_rate"] = [&] {
        try {
            return Json(decay_rate(p.u, grid));
        } catch (const std::domain_error&) {
            return Json(nullptr);
        }
    }();
    if (wants(o, "json")) write_json(dir / "fast_base.json", j);
    std::cout << "fast base wave: crest " << p.u[0] << " in ("
              << fast_crest_lower_bound(o.lambda) << ", " << o.lambda << ")\n";
    return kExitOk;
}

int write_branch_outputs(const Options& o, const Branch& b, const std::string& stem) {
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    write_sidecar_log(dir, stem);
    if (wants(o, "json")) write_json(dir / (stem + ".json"), branch_to_json(b));
    char name[64];
    for (size_t i = 0; i < b.points.size(); ++i) {
        std::snprintf(name, sizeof name, "point_%04zu", i);
        write_profile_outputs(o, dir, name, b.points[i].profile);
    }
    std::cout << stem << ": " << b.points.size() << " accepted points, termination "
              << to_string(b.reason) << " (" << b.detail << ")\n";
    if (!b.points.empty())
        std::cout << "  final parameter " << b.points.back().param << ", u(0) "
                  << b.points.back().diagnostics.u_crest << "\n";
    return b.points.empty() ? kExitNumerical : kExitOk;
}

int cmd_continue_slow(const Options& o) {
    if (!(o.beta > 0.0) || !(o.lambda_max > 0.0)) {
        std::cerr << "config error: need positive --beta and --lambda-max\n";
        return kExitConfig;
    }
    Grid grid = o.L > 0.0 ? Grid(o.L, o.n) : default_slow_grid(o.beta, o.n);
    Branch b = continue_slow(o.beta, o.lambda_max, step_settings(o), &grid);
    return write_branch_outputs(o, b, "branch_slow");
}

int cmd_continue_fast(const Options& o) {
    if (!(o.lambda > 1.0) || !(o.k > 0.0 && o.k < o.lambda) || !(o.s_max > 0.0)) {
        std::cerr << "config error: need --lambda > 1, 0 < --k < lambda, --s-max > 0\n";
        return kExitConfig;
    }
    Grid grid = o.L > 0.0 ? Grid(o.L, o.n) : default_fast_grid(o.lambda, o.n);
    Branch b = continue_fast(o.lambda, o.k, o.s_max, step_settings(o), &grid);
    return write_branch_outputs(o, b, "branch_fast");
}

int cmd_fronts(const Options& o) {
    fs::path dir(o.out_dir);
    fs::create_directories(dir);
    write_sidecar_log(dir, "fronts");
    Json j;
    j["schema"] = 1;
    j["mode"] = o.mode;
    if (o.mode == "slow") {
        if (!(o.beta > 0.0)) {
            std::cerr << "config error: --beta must be positive\n";
            return kExitConfig;
        }
        FrontScanReport rep = slow_front_excluded(o.beta, o.scan_n);
        j["beta"] = o.beta;
        j["t"] = rep.t;
        j["scan_n"] = rep.scan_n;
        j["max_G"] = rep.max_g;
        j["z_at_max"] = rep.z_at_max;
        j["excluded"] = rep.excluded;
        auto tz = threshold_gzz_positive();
        auto tg = threshold_g_negative();
        auto tb = threshold_beta2_exclusion();
        j["thresholds"] = Json{
            {"gzz_positive", Json{{"quoted", tz.quoted}, {"recomputed", tz.recomputed}}},
            {"g_negative", Json{{"quoted", tg.quoted}, {"recomputed", tg.recomputed}}},
            {"beta2_exclusion", Json{{"quoted", tb.quoted}, {"recomputed", tb.recomputed}}}};
        std::cout << "slow front scan: t = " << rep.t << ", max G = " << rep.max_g
                  << ", fronts excluded: " << (rep.excluded ? "yes" : "no") << "\n";
    } else if (o.mode == "fast") {
        if (!(o.samples > 0)) {
            std::cerr << "config error: --samples must be positive\n";
            return kExitConfig;
        }
        Json arr = Json::array();
        bool all_negative = true;
        for (int i = 1; i <= o.samples; ++i) {
            double lambda = 1.0 + 9.0 * i / o.samples;
            double obs = fast_front_obstruction(lambda);
            if (!(obs < 0.0)) all_negative = false;
            arr.push_back(Json{{"lambda", lambda},
                               {"obstruction", obs},
                               {"reduced", reduced_obstruction_fast(lambda)}});
        }
        j["samples"] = std::move(arr);
        j["all_negative"] = all_negative;
        std::cout << "fast front scan: obstruction negative at all " << o.samples
                  << " samples: " << (all_negative ? "yes" : "no") << "\n";
    } else {
        std::cerr << "config error: --mode must be slow or fast\n";
        return kExitConfig;
    }
    if (wants(o, "json")) write_json(dir / ("fronts_" + o.mode + ".json"), j);
    return kExitOk;
}

int cmd_verify() {
    auto results = acceptance::run_all(&std::cout);
    return acceptance::all_passed(results) ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solitary-wave solver for the abcd Boussinesq traveling-wave system"};
    app.fallthrough();
    Options o;

    app.set_config("--config", "", "flat key=value configuration file");
    app.add_option("--beta", o.beta, "slow-family width parameter");
    app.add_option("--branch", o.branch, "stationary branch: plus | minus")
        ->check(CLI::IsMember({"plus", "minus"}));
    app.add_option("--lambda", o.lambda, "wave speed (fast family)");
    app.add_option("--k", o.k, "fast-family coefficient slope");
    app.add_option("--lambda-max", o.lambda_max, "slow continuation upper bound");
    app.add_option("--s-max", o.s_max, "fast continuation upper bound");
    app.add_option("--L", o.L, "grid half length (0 = family default)");
    app.add_option("--n", o.n, "grid point count")->check(CLI::Range(16, 1 << 22));
    app.add_option("--step", o.step, "initial continuation step (0 = default)");
    app.add_option("--max-step", o.max_step, "continuation step cap (0 = default)");
    app.add_option("--gap-tol", o.gap_tol, "ellipticity-gap termination tolerance");
    app.add_option("--stag-tol", o.stag_tol, "stagnation-gap termination tolerance");
    app.add_option("--nmax", o.blowup_max, "blowup threshold for N");
    app.add_option("--tail-tol", o.tail_tol, "far-field tail tolerance");
    app.add_option("--mode", o.mode, "front scan mode: slow | fast");
    app.add_option("--scan-n", o.scan_n, "front scan resolution")->check(CLI::PositiveNumber);
    app.add_option("--samples", o.samples, "fast front sample count");
    app.add_flag("--verify", o.verify_flag, "include pass/fail checks in the summary");
    app.add_option("--out", o.out_dir, "output directory");
    app.add_option("--formats", o.formats, "output formats: csv json gnuplot-dat")
        ->delimiter(',');

    auto* c_st = app.add_subcommand("stationary", "closed-form stationary wave + diagnostics");
    auto* c_fb = app.add_subcommand("fast-base", "classical Boussinesq supercritical wave");
    auto* c_cs = app.add_subcommand("continue-slow", "trace the slow branch in lambda");
    auto* c_cf = app.add_subcommand("continue-fast", "trace the fast branch in s");
    auto* c_fr = app.add_subcommand("fronts", "monotone-front nonexistence scans");
    auto* c_ve = app.add_subcommand("verify", "run the full verification suite");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitConfig;
    }

    for (const auto& f : o.formats) {
        if (f != "csv" && f != "json" && f != "gnuplot-dat") {
            std::cerr << "config error: unknown format '" << f << "'\n";
            return kExitConfig;
        }
    }

    try {
        if (c_st->parsed()) return cmd_stationary(o);
        if (c_fb->parsed()) return cmd_fast_base(o);
        if (c_cs->parsed()) return cmd_continue_slow(o);
        if (c_cf->parsed()) return cmd_continue_fast(o);
        if (c_fr->parsed()) return cmd_fronts(o);
        if (c_ve->parsed()) return cmd_verify();
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
