#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varfrac/frac_calculus.hpp"
#include "varfrac/mittag_leffler.hpp"

namespace varfrac {

struct PicardConfig {
    double fixed_point_tol = 1e-10;  // relative, sup-time L^p
    int max_iter = 200;
    std::optional<double> window_override;
    enum class InitialIterate { Anchor, Zero };
    InitialIterate initial_iterate = InitialIterate::Anchor;
};

struct WindowStats {
    std::size_t window = 0;
    int iterations = 0;
    double contraction_ratio = 0.0;  // worst observed ||d_{i+1}||/||d_i||
};

enum class SolveStatus { Completed, BlowUp };

struct SolveReport {
    Trajectory trajectory;
    SolveStatus status = SolveStatus::Completed;
    double omega_estimate = 0.0;  // last accepted time when status == BlowUp
    double final_norm = 0.0;
    std::vector<WindowStats> per_window;
    double residual = 0.0;            // ||u - Tu|| in sup-time L^p on return
    double continuity_modulus = 0.0;  // max_n ||u_n - u_{n-1}||_p / dt^{alpha0}
    // refined non-uniform tail past the last full grid node (blow-up chase)
    std::vector<std::pair<double, Field>> chase_tail;
    std::vector<std::string> warnings;
};

// Window length tau = min{ (alpha0 Gamma(sup) / (2 ||A||))^{1/alpha0}, 1/2 };
// the cap branch applies when ||A|| = 0.
double picard_step_size(const OrderField& alpha, double a_norm);

// T u = u0 + J^{alpha}(A u) (+ J^{alpha} forcing when supplied).
Trajectory apply_T(const Trajectory& u, const BoundedOperator& A, const OrderField& alpha,
                   const Field& u0, const Trajectory* forcing = nullptr,
                   Scheme scheme = Scheme::L1Linear);

// Windowed Picard iteration for cD^{alpha(x)} u = A u, u(0) = u0, on [0, T].
SolveReport solve_linear(const BoundedOperator& A, const OrderField& alpha, const Field& u0,
                         const TimeGrid& tg, const PicardConfig& cfg = {}, double p = 2.0,
                         Scheme scheme = Scheme::L1Linear);

struct CommuteReport {
    bool commutes = false;
    double worst_residual = 0.0;
};

// Samples the identity (s^{alpha(x)}/Gamma(alpha(x)+1)) A phi = A(...) on random
// fields and log-spaced s in [0.1, 10]; operators diagonal in the grid basis
// short-circuit to true.
CommuteReport commute_check(const BoundedOperator& A, const OrderField& alpha,
                            int sample_count, std::uint64_t seed = 20240517,
                            double p = 2.0);

// Operator Mittag-Leffler series evaluated at every node of tg. Valid as the
// solution when commute_check passes; emits a warning into *warnings otherwise.
Trajectory series_solution(const BoundedOperator& A, const OrderField& alpha,
                           const Field& u0, const TimeGrid& tg,
                           const MlSeriesControl& ctl = {}, double p = 2.0,
                           std::vector<std::string>* warnings = nullptr);

// Closed-form solution of the cumulative-integral example on Omega = (0,1) with
// alpha = alpha1 on (0, split], alpha2 on (split, 1): operator ML series on the
// left half; variation-of-constants on the right half, the weakly singular
// convolution expanded term by term into exact kernel moments.
Trajectory volterra_example_solution(double alpha1, double alpha2, const Field& u0,
                                     const TimeGrid& tg, double split = 0.5,
                                     const MlSeriesControl& ctl = {}, double p = 2.0);

struct OperatorBoundReport {
    int violations = 0;
    double worst_margin = 0.0;  // min over samples of bound - value
    double m_constant = 0.0;
    double lambda = 0.0;
};

// For piecewise-constant alpha with regions {Omega_j, alpha_j} checks the
// exponential bound ||S(t)|| <= M e^{Lambda t}, Lambda = max_j ||A||^{1/alpha_j},
// by maximizing ||series_solution|| / ||phi|| over random unit fields.
OperatorBoundReport solution_operator_bound_check(const BoundedOperator& A,
                                                  const OrderField& alpha,
                                                  std::span<const double> times, int trials,
                                                  std::uint64_t seed = 7, double p = 2.0);

}  // namespace varfrac
