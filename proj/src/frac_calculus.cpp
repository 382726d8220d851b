#include "varfrac/frac_calculus.hpp"

#include <cmath>
#include <stdexcept>

#include "varfrac/gamma_utils.hpp"
#include "varfrac/parallel.hpp"

namespace varfrac {

Trajectory frac_integral(const Trajectory& phi, const OrderField& alpha, Scheme scheme) {
    if (phi.num_points() != alpha.values().size())
        throw std::invalid_argument("frac_integral: alpha/trajectory size mismatch");
    for (std::size_t n = 0; n < phi.num_slices(); ++n)
        for (std::size_t j = 0; j < phi.num_points(); ++j)
            if (!std::isfinite(phi.at(n, j)))
                throw std::invalid_argument("frac_integral: non-finite input");
    KernelWeights w(phi.time(), alpha, scheme);
    Trajectory out(phi.grid(), phi.time());
    w.apply(phi, out);
    return out;
}

Trajectory caputo_derivative(const Trajectory& phi, const OrderField& alpha) {
    if (phi.num_points() != alpha.values().size())
        throw std::invalid_argument("caputo_derivative: alpha/trajectory size mismatch");
    std::size_t N = phi.time().steps();
    if (N < 2) throw std::invalid_argument("caputo_derivative: need at least two time steps");
    double dt = phi.time().dt();
    Trajectory out(phi.grid(), phi.time());
    std::size_t np = phi.num_points();
    parallel_for(np, [&](std::size_t j) {
        double a = alpha.value(j);
        std::vector<double> G(N + 1);
        if (a == 1.0) {
            for (std::size_t n = 0; n <= N; ++n) G[n] = phi.at(n, j);
        } else {
            std::vector<double> d(N + 1);
            double phi0 = phi.at(0, j);
            for (std::size_t n = 0; n <= N; ++n) d[n] = phi.at(n, j) - phi0;
            apply_singular_basis(d, 1.0 - a, a, dt, G);
        }
        // second-order one-sided stencils at the ends, centered inside
        out.at(0, j) = (-3.0 * G[0] + 4.0 * G[1] - G[2]) / (2.0 * dt);
        for (std::size_t n = 1; n < N; ++n)
            out.at(n, j) = (G[n + 1] - G[n - 1]) / (2.0 * dt);
        out.at(N, j) = (3.0 * G[N] - 4.0 * G[N - 1] + G[N - 2]) / (2.0 * dt);
    });
    return out;
}

double check_composition(const OrderField& alpha1, const OrderField& alpha2,
                         const Trajectory& phi, double p) {
    std::size_t np = phi.num_points();
    if (alpha1.values().size() != np || alpha2.values().size() != np)
        throw std::invalid_argument("check_composition: alpha/trajectory size mismatch");
    std::vector<double> sum(np);
    for (std::size_t j = 0; j < np; ++j) {
        sum[j] = alpha1.value(j) + alpha2.value(j);
        if (sum[j] > 1.0 + 1e-14)
            throw std::invalid_argument("check_composition: combined order exceeds 1");
        sum[j] = std::min(sum[j], 1.0);
    }
    Trajectory inner = frac_integral(phi, alpha2, Scheme::L1Linear);
    OrderField combined = OrderField::from_values(phi.grid(), sum);
    Trajectory direct = frac_integral(phi, combined, Scheme::L1Linear);

    std::size_t N = phi.time().steps();
    double dt = phi.time().dt();
    Trajectory left(phi.grid(), phi.time());
    parallel_for(np, [&](std::size_t j) {
        std::vector<double> g(N + 1), o(N + 1);
        for (std::size_t n = 0; n <= N; ++n) g[n] = inner.at(n, j);
        // the inner result carries a t^{alpha2} leading term; interpolate in
        // that basis when applying the outer integral
        apply_singular_basis(g, alpha1.value(j), alpha2.value(j), dt, o);
        for (std::size_t n = 0; n <= N; ++n) left.at(n, j) = o[n];
    });
    return sup_lp_distance(left, direct, p);
}

}  // namespace varfrac
