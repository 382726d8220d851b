#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "varfrac/grid.hpp"

namespace varfrac {

// (lower, upper) with lower <= s^{alpha(x)-1} <= upper for all admissible x.
// For s <= 1 the pair is (s^{sup-1}, s^{alpha0-1}); for s >= 1 it flips.
std::pair<double, double> kernel_pointwise_bounds(const OrderField& alpha, double s);

// |s2^{a0-1}-s1^{a0-1}|/a0 + |s2^{sup-1}-s1^{sup-1}|/sup, an upper bound for
// |s2^{alpha(x)-1} - s1^{alpha(x)-1}| uniformly in x.
double kernel_difference_bound(const OrderField& alpha, double s1, double s2);

struct PowerPredicates {
    // ((1-theta)/theta) y^theta + ((1-gamma)/gamma) y^gamma - y/(e log y) > 0,
    // evaluated only on y in [e^{1/(1-theta)}, e^{1/(1-gamma)}]
    std::optional<bool> combination_positive;
    // (1-beta) y^beta <= ((1-theta)/theta) y^theta + ((1-gamma)/gamma) y^gamma
    bool envelope_holds;
};

// Literal evaluation of the two scalar inequalities underlying the kernel
// difference bound. Requires 0 < theta < gamma < 1, beta in [theta, gamma],
// y > 0.
PowerPredicates lemma_predicates(double theta, double gamma, double beta, double y);

// C(T, alpha) = (1/Gamma(sup)) [T^{alpha0}/alpha0 + T^{sup}/sup];
// contract: sup-in-time L^p norm of J^{alpha} phi is <= C * sup-norm of phi.
double integral_operator_bound(const OrderField& alpha, double T);

struct InequalitySuiteResult {
    std::string predicate;
    long samples = 0;
    long violations = 0;      // margin below -1e-12 (scaled)
    double worst_margin = 0;  // most negative observed slack
};

// Seeded randomized certification of the six scalar inequalities: the Gamma
// ordering, the two kernel regime bounds, the kernel difference bound, and the
// two power predicates. Sampling: alpha0 ~ U(0.05, 0.95), gamma ~ U(alpha0, 1),
// s ~ exp(U(-6, 6)).
std::vector<InequalitySuiteResult> run_inequality_suites(long samples, std::uint64_t seed);

}  // namespace varfrac
