#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "varfrac/field.hpp"

namespace varfrac {

enum class Scheme { Rectangle, L1Linear };

// Product-integration weights for the history sum
//   (J^{alpha_j} phi)(t_n, x_j) = sum_m  w_j(n, m) phi(t_m, x_j),
// with the kernel (t_n - s)^{alpha-1} integrated exactly on every subinterval
// and phi interpolated piecewise constant (Rectangle) or piecewise linear
// (L1Linear). On a uniform grid the weights depend on the lag n - m only, so
// the storage is one lag array pair per spatial point.
//
// All weights are nonnegative and every row sums to t_n^alpha / Gamma(alpha+1)
// (the kernel integral of the constant 1).
class KernelWeights {
public:
    KernelWeights(const TimeGrid& tg, const OrderField& alpha, Scheme scheme);

    Scheme scheme() const { return scheme_; }
    const TimeGrid& time() const { return tg_; }
    std::size_t num_points() const { return np_; }

    // coefficient of phi(t_m, x_j) in row n
    double weight(std::size_t n, std::size_t m, std::size_t j) const;
    double row_sum(std::size_t n, std::size_t j) const;

    // out(t_n, x_j) = sum_m w_j(n,m) phi(t_m, x_j) for all n
    void apply(const Trajectory& phi, Trajectory& out) const;

    // partial row sum over node range [m0, m1) for point j at row n
    double partial(const Trajectory& phi, std::size_t n, std::size_t j,
                   std::size_t m0, std::size_t m1) const;

private:
    TimeGrid tg_;
    Scheme scheme_;
    std::size_t np_;
    std::size_t nlag_;
    std::vector<double> alpha_;
    // L1Linear: a_[j*nlag+l-1] multiplies the left node of the interval at lag l,
    //           b_[...] the right node. Rectangle: a_ only.
    std::vector<double> a_;
    std::vector<double> b_;
};

// Row weights of the L1 scheme on an arbitrary strictly increasing node
// sequence: returns w such that J^{beta} phi(nodes[row]) ~ sum_m w[m] phi_m.
std::vector<double> l1_row_weights(std::span<const double> nodes, std::size_t row,
                                   double beta);

// Uniform-grid L1 lag tables for any beta > 0: interval at lag l = n - k
// contributes left[l-1] phi_k + right[l-1] phi_{k+1} to row n.
struct LagPair {
    std::vector<double> left;
    std::vector<double> right;
};
LagPair l1_uniform_lag(double beta, std::size_t nlag, double dt);

// int_a^b (tn - s)^{beta-1} s^{gam} ds for 0 <= a < b <= tn, beta in (0,1],
// gam >= 0, evaluated by two-sided geometric series (relative error ~1e-15).
double weak_singular_moment(double beta, double gam, double tn, double a, double b);

// J^{beta} of nodal data on a uniform grid with per-interval interpolation in
// the basis {1, s^gam}; reproduces a + b t^gam inputs exactly. Used where the
// integrand is known to carry a t^gam leading term (outputs of J^{gam} and
// solutions of the evolution problems).
void apply_singular_basis(std::span<const double> vals, double beta, double gam,
                          double dt, std::span<double> out);

}  // namespace varfrac
