#pragma once

#include <stdexcept>

#include "varfrac/operators.hpp"

namespace varfrac {

struct MlSeriesControl {
    double rel_tol = 1e-14;
    int max_terms = 400;
};

// Smallest n with alpha0 * n + 1 >= eta, the index past which 1/Gamma(alpha n + 1)
// is monotone in alpha.
int ml_k_star(double alpha0);

class MlUnconvergedError : public std::runtime_error {
public:
    MlUnconvergedError(std::string msg, double partial)
        : std::runtime_error(std::move(msg)), partial_value(partial) {}
    double partial_value;
};

// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta), alpha in (0,1], beta > 0.
// Summation runs in extended precision so alternating arguments keep full
// double accuracy. Throws MlUnconvergedError when max_terms is hit first.
double ml_scalar(double alpha, double beta, double z, const MlSeriesControl& ctl = {});

// Operator series sum_k t^{alpha_j k} (A^k u0)_j / Gamma(alpha_j k + beta);
// beta = 1 is the solution series of the evolution problem. Truncates when the
// L^p norm of the increment stays below rel_tol * accumulated norm for three
// consecutive terms and k >= k_star.
Field ml_operator_apply(const OrderField& alpha, double t, const BoundedOperator& A,
                        const Field& u0, const MlSeriesControl& ctl = {}, double p = 2.0,
                        double beta = 1.0);

// Two-regime envelope dominating the operator series norm:
//   M exp(||A||^{1/alpha0} t)                    for t <= 1
//   M exp(||A||^{1/alpha0} t^{sup/alpha0})       for t  > 1
// with M assembled from the finite prefix up to k_star over Gamma(eta) plus a
// numerically evaluated envelope constant for E_{alpha0}.
double growth_envelope(const OrderField& alpha, double a_norm, double t);

}  // namespace varfrac
