#include "varfrac/linear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "varfrac/gamma_utils.hpp"
#include "varfrac/parallel.hpp"

namespace varfrac {

double picard_step_size(const OrderField& alpha, double a_norm) {
    if (!(a_norm >= 0.0)) throw std::invalid_argument("picard_step_size: norm must be >= 0");
    if (a_norm == 0.0) return 0.5;
    double a0 = alpha.alpha0();
    double tau = std::pow(a0 * gamma_fn(alpha.sup()) / (2.0 * a_norm), 1.0 / a0);
    return std::min(tau, 0.5);
}

Trajectory apply_T(const Trajectory& u, const BoundedOperator& A, const OrderField& alpha,
                   const Field& u0, const Trajectory* forcing, Scheme scheme) {
    if (u.num_points() != u0.size())
        throw std::invalid_argument("apply_T: initial datum size mismatch");
    Trajectory au(u.grid(), u.time());
    std::vector<double> tmp(u.num_points());
    for (std::size_t n = 0; n < u.num_slices(); ++n) {
        A.apply(u.slice(n), tmp);
        if (forcing) {
            auto fs = forcing->slice(n);
            for (std::size_t j = 0; j < tmp.size(); ++j) tmp[j] += fs[j];
        }
        au.set_slice(n, tmp);
    }
    Trajectory out = frac_integral(au, alpha, scheme);
    for (std::size_t n = 0; n < out.num_slices(); ++n) {
        auto s = out.slice(n);
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += u0.values[j];
    }
    return out;
}

SolveReport solve_linear(const BoundedOperator& A, const OrderField& alpha, const Field& u0,
                         const TimeGrid& tg, const PicardConfig& cfg, double p,
                         Scheme scheme) {
    if (!(tg.horizon() > 0.0)) throw std::invalid_argument("solve_linear: horizon must be > 0");
    std::size_t N = tg.steps();
    std::size_t nx = u0.size();
    double dt = tg.dt();
    double a_norm = A.norm_estimate(p);
    double tau = cfg.window_override.value_or(picard_step_size(alpha, a_norm));

    SolveReport rep{Trajectory(u0.grid, tg)};
    std::size_t wlen = static_cast<std::size_t>(std::floor(tau / dt));
    if (wlen < 1) {
        wlen = 1;
        rep.warnings.push_back(
            "window length below the time step; contraction constant not certified, refine the grid");
    }

    KernelWeights weights(tg, alpha, scheme);
    Trajectory& u = rep.trajectory;
    Trajectory au(u0.grid, tg);
    std::vector<double> tmp(nx), hist(nx);
    // initial iterate: constant-in-time extension of the window start value
    for (std::size_t n = 0; n <= N; ++n) u.set_slice(n, u0.values);
    if (cfg.initial_iterate == PicardConfig::InitialIterate::Zero)
        for (std::size_t n = 1; n <= N; ++n)
            std::fill(u.slice(n).begin(), u.slice(n).end(), 0.0);
    A.apply(u.slice(0), tmp);
    au.set_slice(0, tmp);

    double u_scale = std::max(lp_norm(u0, p), 1e-300);
    std::size_t start = 0;
    std::size_t window_index = 0;
    while (start < N) {
        std::size_t end = std::min(N, start + wlen);
        // frozen-history contribution per active row
        std::vector<std::vector<double>> history(end - start, std::vector<double>(nx));
        parallel_for(nx, [&](std::size_t j) {
            for (std::size_t n = start + 1; n <= end; ++n)
                history[n - start - 1][j] = weights.partial(au, n, j, 0, start + 1);
        });
        WindowStats stats{window_index, 0, 0.0};
        double prev_change = -1.0;
        for (int it = 0; it < cfg.max_iter; ++it) {
            for (std::size_t n = start + 1; n <= end; ++n) {
                A.apply(u.slice(n), tmp);
                au.set_slice(n, tmp);
            }
            double change = 0.0;
            for (std::size_t n = start + 1; n <= end; ++n) {
                for (std::size_t j = 0; j < nx; ++j)
                    hist[j] = u0.values[j] + history[n - start - 1][j] +
                              weights.partial(au, n, j, start + 1, n + 1);
                auto s = u.slice(n);
                for (std::size_t j = 0; j < nx; ++j) {
                    double d = hist[j] - s[j];
                    tmp[j] = d;
                    s[j] = hist[j];
                }
                change = std::max(change, lp_norm(tmp, u0.grid->weights(), p));
            }
            stats.iterations = it + 1;
            if (prev_change > 0.0)
                stats.contraction_ratio = std::max(stats.contraction_ratio, change / prev_change);
            prev_change = std::max(change, 1e-300);
            u_scale = std::max(u_scale, 1e-300);
            for (std::size_t n = start + 1; n <= end; ++n)
                u_scale = std::max(u_scale, lp_norm(u.slice(n), u0.grid->weights(), p));
            if (change <= cfg.fixed_point_tol * u_scale) break;
            if (it + 1 == cfg.max_iter)
                throw std::runtime_error(
                    "solve_linear: fixed point iteration exceeded max_iter (tolerance/step "
                    "inconsistency)");
        }
        for (std::size_t n = start + 1; n <= end; ++n) {
            A.apply(u.slice(n), tmp);
            au.set_slice(n, tmp);
        }
        rep.per_window.push_back(stats);
        start = end;
        ++window_index;
    }

    Trajectory tu = apply_T(u, A, alpha, u0, nullptr, scheme);
    rep.residual = sup_lp_distance(u, tu, p);
    rep.final_norm = lp_norm(u.slice(N), u0.grid->weights(), p);
    double cmod = 0.0;
    std::vector<double> diff(nx);
    for (std::size_t n = 1; n <= N; ++n) {
        auto a = u.slice(n), b = u.slice(n - 1);
        for (std::size_t j = 0; j < nx; ++j) diff[j] = a[j] - b[j];
        cmod = std::max(cmod, lp_norm(diff, u0.grid->weights(), p));
    }
    rep.continuity_modulus = cmod / std::pow(dt, alpha.alpha0());
    return rep;
}

CommuteReport commute_check(const BoundedOperator& A, const OrderField& alpha,
                            int sample_count, std::uint64_t seed, double p) {
    if (sample_count < 1) throw std::invalid_argument("commute_check: need at least one sample");
    CommuteReport rep;
    if (A.is_diagonal()) {
        rep.commutes = true;
        return rep;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::size_t nx = alpha.values().size();
    auto grid = alpha.grid();
    std::vector<double> phi(nx), lhs(nx), rhs(nx), scaled(nx), diff(nx);
    for (int smp = 0; smp < sample_count; ++smp) {
        for (auto& v : phi) v = unif(rng);
        double ls = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        double s = std::pow(10.0, ls);  // log-spaced in [0.1, 10]
        std::vector<double> factor(nx);
        for (std::size_t j = 0; j < nx; ++j)
            factor[j] = std::pow(s, alpha.value(j)) / gamma_fn(alpha.value(j) + 1.0);
        A.apply(phi, lhs);
        for (std::size_t j = 0; j < nx; ++j) {
            lhs[j] *= factor[j];
            scaled[j] = factor[j] * phi[j];
        }
        A.apply(scaled, rhs);
        for (std::size_t j = 0; j < nx; ++j) diff[j] = lhs[j] - rhs[j];
        double denom = std::max({lp_norm(lhs, grid->weights(), p),
                                 lp_norm(rhs, grid->weights(), p), 1e-300});
        rep.worst_residual =
            std::max(rep.worst_residual, lp_norm(diff, grid->weights(), p) / denom);
    }
    rep.commutes = rep.worst_residual <= 1e-10;
    return rep;
}

Trajectory series_solution(const BoundedOperator& A, const OrderField& alpha,
                           const Field& u0, const TimeGrid& tg, const MlSeriesControl& ctl,
                           double p, std::vector<std::string>* warnings) {
    CommuteReport commute = commute_check(A, alpha, 32);
    if (!commute.commutes && warnings)
        warnings->push_back("series_solution: operator fails the commutation condition; "
                            "series may differ from the unique solution");
    Trajectory out(u0.grid, tg);
    for (std::size_t n = 0; n < tg.nodes(); ++n) {
        Field f = ml_operator_apply(alpha, tg.node(n), A, u0, ctl, p);
        out.set_slice(n, f.values);
    }
    return out;
}

namespace {

// Restriction of a field / grid to an index range [lo, hi).
SpatialGridPtr subgrid(const SpatialGridPtr& g, std::size_t lo, std::size_t hi,
                       double left, double right) {
    std::vector<double> pts(g->points().begin() + lo, g->points().begin() + hi);
    std::vector<double> w(g->weights().begin() + lo, g->weights().begin() + hi);
    return std::make_shared<const SpatialGrid>(std::move(pts), std::move(w), left, right);
}

}  // namespace

Trajectory volterra_example_solution(double alpha1, double alpha2, const Field& u0,
                                     const TimeGrid& tg, double split,
                                     const MlSeriesControl& ctl, double p) {
    auto grid = u0.grid;
    std::size_t nx = grid->size();
    std::size_t nl = 0;
    while (nl < nx && grid->points()[nl] <= split) ++nl;
    if (nl == 0 || nl == nx)
        throw std::invalid_argument("volterra_example_solution: split point not inside the grid");
    // the split must fall on a cell boundary: no point may sit within a weight
    // of the split on its left
    auto gl = subgrid(grid, 0, nl, grid->left(), split);
    auto gr = subgrid(grid, nl, nx, split, grid->right());

    BoundedOperator a1 = BoundedOperator::volterra(gl);
    BoundedOperator a2 = BoundedOperator::volterra(gr);
    Field u0l(gl, std::vector<double>(u0.values.begin(), u0.values.begin() + nl));
    Field u0r(gr, std::vector<double>(u0.values.begin() + nl, u0.values.end()));

    std::size_t N = tg.steps();
    Trajectory out(grid, tg);

    // left half: plain operator series
    std::vector<double> c(N + 1);  // c(t) = int_0^split u_left(t, y) dy
    for (std::size_t n = 0; n <= N; ++n) {
        Field ul = ml_operator_apply(OrderField::constant(gl, alpha1), tg.node(n), a1, u0l,
                                     ctl, p);
        auto s = out.slice(n);
        double acc = 0.0;
        for (std::size_t j = 0; j < nl; ++j) {
            s[j] = ul.values[j];
            acc += gl->weights()[j] * ul.values[j];
        }
        c[n] = acc;
    }

    // right half: E_{a2}(t^{a2} A2) u0 plus the variation-of-constants term.
    // The convolution expands term by term:
    //   sum_k (A2^k 1) * int_0^t (t-s)^{a2(k+1)-1} c(s) ds / Gamma(a2(k+1)),
    // each kernel moment integrated exactly against piecewise-linear c.
    OrderField alpha_r = OrderField::constant(gr, alpha2);
    std::size_t nr = nx - nl;
    for (std::size_t n = 0; n <= N; ++n) {
        Field ur = ml_operator_apply(alpha_r, tg.node(n), a2, u0r, ctl, p);
        auto s = out.slice(n);
        for (std::size_t j = 0; j < nr; ++j) s[nl + j] = ur.values[j];
    }
    std::vector<double> ones_pow(nr, 1.0), nextp(nr);
    double c_norm = *std::max_element(c.begin(), c.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    c_norm = std::max(std::abs(c_norm), 1e-300);
    for (int k = 0; k < ctl.max_terms; ++k) {
        double order = alpha2 * static_cast<double>(k + 1);
        // J^{order} c at all nodes (order may exceed 1; the moment formulas hold)
        std::vector<double> jc(N + 1, 0.0);
        LagPair lag = l1_uniform_lag(order, N, tg.dt());
        parallel_for(N, [&](std::size_t idx) {
            std::size_t n = idx + 1;
            long double acc = 0.0L;
            for (std::size_t m = 0; m < n; ++m) {
                acc += static_cast<long double>(lag.left[n - m - 1]) * c[m];
                acc += static_cast<long double>(lag.right[n - m - 1]) * c[m + 1];
            }
            jc[n] = static_cast<double>(acc);
        });
        double pmax = 0.0;
        for (std::size_t j = 0; j < nr; ++j) pmax = std::max(pmax, std::abs(ones_pow[j]));
        double jmax = 0.0;
        for (std::size_t n = 0; n <= N; ++n) jmax = std::max(jmax, std::abs(jc[n]));
        for (std::size_t n = 1; n <= N; ++n) {
            auto s = out.slice(n);
            for (std::size_t j = 0; j < nr; ++j) s[nl + j] += ones_pow[j] * jc[n];
        }
        if (k >= 2 && pmax * jmax <= ctl.rel_tol * c_norm) break;
        if (k + 1 == ctl.max_terms)
            throw MlUnconvergedError("volterra_example_solution: correction series not converged",
                                     pmax * jmax);
        a2.apply(ones_pow, nextp);
        ones_pow.swap(nextp);
    }
    return out;
}

OperatorBoundReport solution_operator_bound_check(const BoundedOperator& A,
                                                  const OrderField& alpha,
                                                  std::span<const double> times, int trials,
                                                  std::uint64_t seed, double p) {
    if (!alpha.regions())
        throw std::invalid_argument(
            "solution_operator_bound_check: piecewise-constant alpha required");
    OperatorBoundReport rep;
    double a_norm = A.norm_estimate(p);
    rep.lambda = 0.0;
    rep.m_constant = 0.0;
    const auto& regs = *alpha.regions();
    for (const auto& r : regs) {
        rep.lambda = std::max(rep.lambda, std::pow(a_norm, 1.0 / r.value));
        OrderField reg = OrderField::constant(alpha.grid(), r.value);
        // growth_envelope at t=0 returns the per-region constant
        rep.m_constant = std::max(rep.m_constant, growth_envelope(reg, a_norm, 0.0));
    }
    rep.m_constant *= static_cast<double>(regs.size());

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::size_t nx = alpha.values().size();
    rep.worst_margin = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        Field phi(alpha.grid(), std::vector<double>(nx));
        for (auto& v : phi.values) v = unif(rng);
        double nrm = lp_norm(phi, p);
        if (nrm < 1e-12) continue;
        for (auto& v : phi.values) v /= nrm;
        for (double t : times) {
            Field st = ml_operator_apply(alpha, t, A, phi, {}, p);
            double bound = rep.m_constant * std::exp(rep.lambda * t);
            double margin = bound - lp_norm(st, p);
            rep.worst_margin = std::min(rep.worst_margin, margin);
            if (margin < 0.0) ++rep.violations;
        }
    }
    return rep;
}

}  // namespace varfrac
