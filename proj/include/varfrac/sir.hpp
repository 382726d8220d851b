#pragma once

#include "varfrac/semilinear_solver.hpp"

namespace varfrac {

// Population compartments on a shared grid over Omega = [0, 1].
struct SirState {
    Field s;
    Field i;
    Field r;
};

enum class SirCoupling {
    NonlocalPaper,    // infection term beta S(t,x) * int_0^x I(t,y) dy
    LocalClassical,   // infection term beta S(t,x) I(t,x); conserves S+I+R
};

struct SirParams {
    double beta = 0.5;   // transmission rate (demo default)
    double gamma = 0.2;  // recovery rate (demo default)
    SirCoupling coupling = SirCoupling::NonlocalPaper;
};

// The three compartment right-hand sides; the nonlocal mode routes the
// cumulative-infection term through the Volterra operator.
SirState sir_rhs(double t, const SirState& state, const SirParams& params);

struct SirReport {
    SolveStatus status = SolveStatus::Completed;
    std::vector<double> times;
    std::vector<SirState> states;
    // diagnostics per time node
    std::vector<double> defect_norm;  // || beta S (int_0^x I - I) ||_p, nonlocal mode
    std::vector<double> total_norm;   // || S + I + R ||_p
    std::vector<WindowStats> per_window;
    std::vector<std::string> warnings;
    double final_norm = 0.0;
    double omega_estimate = 0.0;
};

// Delegates to solve_semilinear with A = 0 and f = sir_rhs on the stacked
// three-compartment state.
SirReport simulate_sir(const SirState& initial, const SirParams& params,
                       const OrderField& alpha, const TimeGrid& tg,
                       double blowup_threshold = 1e8, const SemilinearConfig& cfg = {},
                       double p = 2.0);

}  // namespace varfrac
