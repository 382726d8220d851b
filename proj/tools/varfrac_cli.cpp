#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "varfrac/bounds.hpp"
#include "varfrac/mittag_leffler.hpp"
#include "varfrac/run_config.hpp"

using namespace varfrac;

namespace {

int run_solve_linear(const std::string& config_path) {
    auto start = std::chrono::steady_clock::now();
    RunConfig rc = load_run_config(config_path);
    if (rc.problem != "linear") throw ConfigError("config.problem: expected 'linear'");
    TimeGrid tg(rc.horizon, rc.nt);
    SolveReport rep = solve_linear(*rc.op, *rc.alpha, *rc.initial, tg, rc.picard, rc.p,
                                   rc.scheme);
    if (!rc.output.empty()) write_solution_csv(rc.output, rep);
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("status=completed final_norm=%.6g residual=%.3g runtime=%.2fs\n",
                rep.final_norm, rep.residual, secs);
    return 0;
}

int run_solve_semilinear(const std::string& config_path) {
    auto start = std::chrono::steady_clock::now();
    RunConfig rc = load_run_config(config_path);
    if (rc.problem != "semilinear") throw ConfigError("config.problem: expected 'semilinear'");
    TimeGrid tg(rc.horizon, rc.nt);
    SemilinearConfig scfg;
    scfg.picard = rc.picard;
    scfg.seed = rc.seed;
    const BoundedOperator* A = rc.op ? &*rc.op : nullptr;
    SolveReport rep = solve_semilinear(A, *rc.rhs, *rc.alpha, *rc.initial, tg,
                                       rc.blowup_threshold, scfg, rc.p);
    if (!rc.output.empty()) write_solution_csv(rc.output, rep);
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rep.status == SolveStatus::Completed)
        std::printf("status=completed final_norm=%.6g runtime=%.2fs\n", rep.final_norm, secs);
    else
        std::printf("status=blowup omega_estimate=%.6g final_norm=%.6g runtime=%.2fs\n",
                    rep.omega_estimate, rep.final_norm, secs);
    return 0;
}

int run_simulate_sir(const std::string& config_path) {
    auto start = std::chrono::steady_clock::now();
    RunConfig rc = load_run_config(config_path);
    if (rc.problem != "sir") throw ConfigError("config.problem: expected 'sir'");
    TimeGrid tg(rc.horizon, rc.nt);
    SemilinearConfig scfg;
    scfg.picard = rc.picard;
    scfg.seed = rc.seed;
    SirReport rep = simulate_sir(*rc.sir_initial, rc.sir_params, *rc.alpha, tg,
                                 rc.blowup_threshold, scfg, rc.p);
    if (!rc.output.empty()) write_sir_csv(rc.output, rep);
    if (!rc.diagnostics.empty()) write_sir_diagnostics_csv(rc.diagnostics, rep);
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("status=%s final_norm=%.6g runtime=%.2fs\n",
                rep.status == SolveStatus::Completed ? "completed" : "blowup", rep.final_norm,
                secs);
    return 0;
}

int run_ml_eval(double alpha, double beta, double z) {
    double value = ml_scalar(alpha, beta, z);
    std::printf("%.15g\n", value);
    return 0;
}

int run_verify(long samples, std::uint64_t seed, const std::string& output) {
    auto start = std::chrono::steady_clock::now();
    auto suites = run_inequality_suites(samples, seed);
    std::FILE* f = output.empty() ? stdout : std::fopen(output.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open output file " + output);
    std::fprintf(f, "predicate,samples,violations,worst_margin\n");
    long total_violations = 0;
    for (const auto& s : suites) {
        std::fprintf(f, "%s,%ld,%ld,%.17g\n", s.predicate.c_str(), s.samples, s.violations,
                     s.worst_margin);
        total_violations += s.violations;
    }
    if (f != stdout) std::fclose(f);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("status=%s violations=%ld runtime=%.2fs\n",
                total_violations == 0 ? "completed" : "failed", total_violations, secs);
    return total_violations == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solvers and property checks for abstract Cauchy problems with "
                 "space-dependent fractional time order"};
    app.require_subcommand(1);

    std::string config_path;
    auto* lin = app.add_subcommand("solve-linear", "windowed Picard solver for cD^a(x) u = A u");
    lin->add_option("--config", config_path, "JSON run configuration")->required();

    auto* semi = app.add_subcommand("solve-semilinear",
                                    "local existence steps with blow-up detection");
    semi->add_option("--config", config_path, "JSON run configuration")->required();

    auto* sir = app.add_subcommand("simulate-sir", "generalized fractional SIR scenario");
    sir->add_option("--config", config_path, "JSON run configuration")->required();

    double ml_alpha = 1.0, ml_beta = 1.0, ml_z = 0.0;
    auto* ml = app.add_subcommand("ml-eval", "evaluate the two-parameter Mittag-Leffler series");
    ml->add_option("--alpha", ml_alpha, "series order in (0,1]")->required();
    ml->add_option("--beta", ml_beta, "second parameter, > 0")->required();
    ml->add_option("--z", ml_z, "real argument")->required();

    long samples = 100000;
    std::uint64_t seed = 7;
    std::string verify_output;
    auto* verify = app.add_subcommand("verify-inequalities",
                                      "randomized certification of the kernel inequalities");
    verify->add_option("--samples", samples, "samples per predicate");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--output", verify_output, "CSV destination (default stdout)");

    try {
        app.parse(argc, argv);
        if (lin->parsed()) return run_solve_linear(config_path);
        if (semi->parsed()) return run_solve_semilinear(config_path);
        if (sir->parsed()) return run_simulate_sir(config_path);
        if (ml->parsed()) return run_ml_eval(ml_alpha, ml_beta, ml_z);
        if (verify->parsed()) return run_verify(samples, seed, verify_output);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 1;
    }
    return 0;
}
