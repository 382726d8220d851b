#pragma once

#include "varfrac/kernel_weights.hpp"

namespace varfrac {

// Riemann-Liouville integral of order alpha(x) in t, product-integration form.
Trajectory frac_integral(const Trajectory& phi, const OrderField& alpha,
                         Scheme scheme = Scheme::L1Linear);

// Caputo derivative of order alpha(x): difference in t of the auxiliary
// integral J^{1-alpha}[phi - phi(0)]. The auxiliary integral interpolates in
// the basis {1, s^alpha} per interval, which keeps the first time nodes
// accurate for inputs with the canonical t^alpha leading behaviour; alpha = 1
// falls back to plain difference quotients of phi.
Trajectory caputo_derivative(const Trajectory& phi, const OrderField& alpha);

// sup-over-time L^p distance between J^{a1} J^{a2} phi and J^{a1+a2} phi.
// Throws when a1 + a2 > 1 somewhere. The outer application interpolates the
// inner result in the {1, s^{a2}} basis; the residual certifies the semigroup
// identity under grid refinement.
double check_composition(const OrderField& alpha1, const OrderField& alpha2,
                         const Trajectory& phi, double p = 2.0);

}  // namespace varfrac
