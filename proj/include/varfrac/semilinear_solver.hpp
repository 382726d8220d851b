#pragma once

#include <functional>

#include "varfrac/linear_solver.hpp"

namespace varfrac {

// Right-hand side f(t, u) with local Lipschitz estimation hooks.
struct SemilinearRhs {
    std::function<Field(double, const Field&)> evaluator;
    std::optional<double> lipschitz_hint;
    bool bounded_on_bounded = true;
};

struct StepParameters {
    double r0 = 0.0;    // ball radius
    double beta = 0.0;  // r0 / 2 by default
    double l0 = 0.0;    // Lipschitz estimate on the ball
    double m0 = 0.0;    // max_s ||f(s, anchor)||
    double tau0 = 0.0;  // admissible window length
};

struct SemilinearConfig {
    PicardConfig picard;
    double r0_floor = 1.0;
    double r0_scale = 0.5;  // r0 = max(r0_floor, r0_scale * ||anchor||)
    int max_ball_retries = 10;
    int lipschitz_samples = 16;
    std::uint64_t seed = 20240612;
    std::size_t max_windows = 500000;
};

// Max sampled difference quotient ||f(t,psi)-f(t,phi)|| / ||psi-phi|| over
// random pairs in the L^p ball of radius r0 around the anchor, inflated by 1.5.
// A user hint overrides sampling.
double estimate_lipschitz(const SemilinearRhs& f, double t, const Field& anchor, double r0,
                          int samples, std::uint64_t seed = 1, double p = 2.0);

// tau0 = min{ r0 - beta,
//             [alpha0 Gamma(sup) / (2(||A|| + L0))]^{1/alpha0},
//             [beta alpha0 Gamma(sup) / (2 M0 + 1)]^{1/alpha0} }.
double semilinear_step_size(const OrderField& alpha, double a_norm,
                            const StepParameters& params);

struct LocalStepResult {
    double tau0 = 0.0;
    StepParameters params;
    std::vector<double> times;   // nodes strictly after the anchor time
    std::vector<Field> slices;
    WindowStats stats;
};

// One existence window from a fresh anchor at t = 0: Picard iteration of
// u -> u0 + J^alpha(A u) + J^alpha(f(.,u)) on [0, tau0] snapped to dt substeps;
// iterates are required to stay in the beta-ball around the anchor.
LocalStepResult local_step(const BoundedOperator* A, const SemilinearRhs& f,
                           const OrderField& alpha, const Field& anchor, double dt,
                           const SemilinearConfig& cfg = {}, double p = 2.0);

// Window-by-window continuation until T = tg.horizon(). Returns Completed, or
// BlowUp{omega_estimate} once ||u(t)||_p crosses blowup_threshold; when the
// admissible window falls below the output step the solver refines with a
// non-uniform sub-grid and keeps chasing the norm growth (chase_tail).
SolveReport solve_semilinear(const BoundedOperator* A, const SemilinearRhs& f,
                             const OrderField& alpha, const Field& u0, const TimeGrid& tg,
                             double blowup_threshold, const SemilinearConfig& cfg = {},
                             double p = 2.0);

}  // namespace varfrac
