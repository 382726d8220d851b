#include "varfrac/semilinear_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "varfrac/gamma_utils.hpp"
#include "varfrac/parallel.hpp"

namespace varfrac {

double estimate_lipschitz(const SemilinearRhs& f, double t, const Field& anchor, double r0,
                          int samples, std::uint64_t seed, double p) {
    if (f.lipschitz_hint) return *f.lipschitz_hint;
    if (samples < 2) throw std::invalid_argument("estimate_lipschitz: need at least 2 samples");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> radius(0.05, 1.0);
    std::size_t nx = anchor.size();
    auto perturb = [&]() {
        Field out = anchor;
        std::vector<double> dir(nx);
        for (auto& v : dir) v = unif(rng);
        double nrm = lp_norm(dir, anchor.grid->weights(), p);
        if (nrm < 1e-300) return out;
        double scale = radius(rng) * r0 / nrm;
        for (std::size_t j = 0; j < nx; ++j) out.values[j] += scale * dir[j];
        return out;
    };
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        Field a = perturb();
        Field b = perturb();
        Field da = f.evaluator(t, a);
        Field db = f.evaluator(t, b);
        double denom = lp_norm(a - b, p);
        if (denom < 1e-14) continue;
        worst = std::max(worst, lp_norm(da - db, p) / denom);
    }
    return 1.5 * worst;
}

double semilinear_step_size(const OrderField& alpha, double a_norm,
                            const StepParameters& params) {
    double a0 = alpha.alpha0();
    double gs = gamma_fn(alpha.sup());
    double t1 = params.r0 - params.beta;
    double t2 = std::pow(a0 * gs / (2.0 * (a_norm + params.l0)), 1.0 / a0);
    double t3 = std::pow(params.beta * a0 * gs / (2.0 * params.m0 + 1.0), 1.0 / a0);
    return std::min({t1, t2, t3});
}

namespace {

double sample_m0(const SemilinearRhs& f, double t0, const Field& anchor, double r0, double p) {
    double m0 = 0.0;
    for (int i = 0; i < 33; ++i) {
        double s = t0 + r0 * static_cast<double>(i) / 32.0;
        m0 = std::max(m0, lp_norm(f.evaluator(s, anchor), p));
    }
    return 1.1 * m0;
}

StepParameters make_step_parameters(const SemilinearRhs& f, const OrderField& alpha,
                                    double a_norm, double t0, const Field& anchor, double r0,
                                    const SemilinearConfig& cfg, std::uint64_t seed, double p) {
    StepParameters sp;
    sp.r0 = r0;
    sp.beta = r0 / 2.0;
    sp.l0 = estimate_lipschitz(f, t0, anchor, r0, cfg.lipschitz_samples, seed, p);
    sp.m0 = sample_m0(f, t0, anchor, r0, p);
    sp.tau0 = semilinear_step_size(alpha, a_norm, sp);
    return sp;
}

struct WindowAttempt {
    bool converged = false;
    bool in_ball = false;
    WindowStats stats;
    std::vector<std::vector<double>> values;  // per new node
    std::vector<std::vector<double>> gvals;
};

// Picard iteration on nodes appended after a frozen history; g = A u + f(., u).
// Uniformly spaced node lists use cached lag tables, arbitrary lists fall back
// to per-row weights.
WindowAttempt run_window(const BoundedOperator* A, const SemilinearRhs& f,
                         const OrderField& alpha, const Field& u0,
                         const std::vector<double>& hist_times,
                         const std::vector<std::vector<double>>& hist_g,
                         const std::vector<double>& new_times, const Field& anchor,
                         double ball_radius, const PicardConfig& picard, double p) {
    std::size_t nx = u0.size();
    std::size_t nh = hist_times.size();
    std::size_t q = new_times.size();
    const auto& w = u0.grid->weights();

    std::vector<double> nodes(hist_times);
    nodes.insert(nodes.end(), new_times.begin(), new_times.end());
    std::size_t total = nodes.size();

    bool uniform = total >= 2;
    double h0 = nodes[1] - nodes[0];
    for (std::size_t i = 1; i + 1 < total && uniform; ++i)
        if (std::abs((nodes[i + 1] - nodes[i]) - h0) > 1e-12 * h0) uniform = false;

    // history contribution (frozen) and window coefficients per (new node, point)
    std::vector<std::vector<double>> hist_part(q, std::vector<double>(nx));
    std::vector<std::vector<double>> coef(q * nx);
    if (uniform) {
        std::map<double, LagPair> cache;
        for (std::size_t j = 0; j < nx; ++j) {
            double aj = alpha.value(j);
            auto it = cache.find(aj);
            if (it == cache.end())
                it = cache.emplace(aj, l1_uniform_lag(aj, total - 1, h0)).first;
            const LagPair& lp = it->second;
            auto node_weight = [&](std::size_t row, std::size_t m) {
                double val = 0.0;
                if (m < row) val += lp.left[row - m - 1];
                if (m >= 1) val += lp.right[row - m];
                return val;
            };
            for (std::size_t i = 0; i < q; ++i) {
                std::size_t row = nh + i;
                long double acc = 0.0L;
                for (std::size_t m = 0; m < nh; ++m)
                    acc += static_cast<long double>(node_weight(row, m)) * hist_g[m][j];
                hist_part[i][j] = static_cast<double>(acc);
                auto& cj = coef[i * nx + j];
                cj.resize(i + 1);
                for (std::size_t m = 0; m <= i; ++m) cj[m] = node_weight(row, nh + m);
            }
        }
    } else {
        for (std::size_t i = 0; i < q; ++i) {
            std::size_t row = nh + i;
            parallel_for(nx, [&](std::size_t j) {
                auto rw = l1_row_weights(nodes, row, alpha.value(j));
                long double acc = 0.0L;
                for (std::size_t m = 0; m < nh; ++m)
                    acc += static_cast<long double>(rw[m]) * hist_g[m][j];
                hist_part[i][j] = static_cast<double>(acc);
                coef[i * nx + j].assign(rw.begin() + static_cast<std::ptrdiff_t>(nh), rw.end());
            });
        }
    }

    WindowAttempt out;
    out.values.assign(q, anchor.values);
    out.gvals.assign(q, std::vector<double>(nx));
    std::vector<double> gtmp(nx), diff(nx);
    double prev_change = -1.0;
    double scale = std::max(lp_norm(anchor, p), 1e-300);
    for (int it = 0; it < picard.max_iter; ++it) {
        for (std::size_t i = 0; i < q; ++i) {
            Field vi(u0.grid, out.values[i]);
            Field fv = f.evaluator(new_times[i], vi);
            if (fv.values.size() != nx)
                throw std::invalid_argument("solve_semilinear: rhs returned wrong field size");
            if (A) {
                A->apply(out.values[i], gtmp);
                for (std::size_t j = 0; j < nx; ++j) out.gvals[i][j] = gtmp[j] + fv.values[j];
            } else {
                out.gvals[i] = fv.values;
            }
        }
        double change = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t j = 0; j < nx; ++j) {
                const auto& cj = coef[i * nx + j];
                long double acc = 0.0L;
                for (std::size_t m = 0; m < cj.size(); ++m)
                    acc += static_cast<long double>(cj[m]) * out.gvals[m][j];
                double v = u0.values[j] + hist_part[i][j] + static_cast<double>(acc);
                if (!std::isfinite(v)) finite = false;
                diff[j] = v - out.values[i][j];
                out.values[i][j] = v;
            }
            change = std::max(change, lp_norm(diff, w, p));
        }
        out.stats.iterations = it + 1;
        if (!finite) return out;  // overflow: the window is too long, reject
        if (prev_change > 0.0)
            out.stats.contraction_ratio =
                std::max(out.stats.contraction_ratio, change / prev_change);
        prev_change = std::max(change, 1e-300);
        for (std::size_t i = 0; i < q; ++i)
            scale = std::max(scale, lp_norm(out.values[i], w, p));
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t j = 0; j < nx; ++j) diff[j] = out.values[i][j] - anchor.values[j];
            if (lp_norm(diff, w, p) > ball_radius * (1.0 + 1e-9)) return out;
        }
        if (change <= picard.fixed_point_tol * scale) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged) return out;
    for (std::size_t i = 0; i < q; ++i) {
        Field vi(u0.grid, out.values[i]);
        Field fv = f.evaluator(new_times[i], vi);
        if (A) {
            A->apply(out.values[i], gtmp);
            for (std::size_t j = 0; j < nx; ++j) out.gvals[i][j] = gtmp[j] + fv.values[j];
        } else {
            out.gvals[i] = fv.values;
        }
    }
    out.in_ball = true;
    return out;
}

std::vector<double> initial_g(const BoundedOperator* A, const SemilinearRhs& f,
                              const Field& u0) {
    Field g0 = f.evaluator(0.0, u0);
    if (A) g0 = g0 + A->apply(u0);
    return g0.values;
}

}  // namespace

LocalStepResult local_step(const BoundedOperator* A, const SemilinearRhs& f,
                           const OrderField& alpha, const Field& anchor, double dt,
                           const SemilinearConfig& cfg, double p) {
    double a_norm = A ? A->norm_estimate(p) : 0.0;
    double r0 = std::max(cfg.r0_floor, cfg.r0_scale * lp_norm(anchor, p));
    std::vector<double> hist_times{0.0};
    std::vector<std::vector<double>> hist_g{initial_g(A, f, anchor)};
    LocalStepResult res;
    for (int attempt = 0; attempt < cfg.max_ball_retries; ++attempt) {
        res.params = make_step_parameters(f, alpha, a_norm, 0.0, anchor, r0, cfg,
                                          cfg.seed + static_cast<std::uint64_t>(attempt), p);
        res.tau0 = res.params.tau0;
        std::size_t m = static_cast<std::size_t>(std::floor(res.tau0 / dt));
        std::vector<double> new_times;
        if (m >= 1)
            for (std::size_t i = 1; i <= m; ++i) new_times.push_back(dt * static_cast<double>(i));
        else
            for (int i = 1; i <= 4; ++i) new_times.push_back(res.tau0 * i / 4.0);
        WindowAttempt wa = run_window(A, f, alpha, anchor, hist_times, hist_g, new_times,
                                      anchor, res.params.beta, cfg.picard, p);
        if (wa.converged && wa.in_ball) {
            res.times = std::move(new_times);
            for (auto& v : wa.values) res.slices.emplace_back(anchor.grid, std::move(v));
            res.stats = wa.stats;
            return res;
        }
        r0 /= 2.0;
    }
    throw std::runtime_error(
        "local_step: window rejected after retries (Lipschitz estimate inconsistent with the data)");
}

SolveReport solve_semilinear(const BoundedOperator* A, const SemilinearRhs& f,
                             const OrderField& alpha, const Field& u0, const TimeGrid& tg,
                             double blowup_threshold, const SemilinearConfig& cfg, double p) {
    if (!(blowup_threshold > lp_norm(u0, p)))
        throw std::invalid_argument("solve_semilinear: threshold must exceed the initial norm");
    std::size_t N = tg.steps();
    std::size_t nx = u0.size();
    double dt = tg.dt();
    double a_norm = A ? A->norm_estimate(p) : 0.0;
    const auto& w = u0.grid->weights();

    std::vector<double> times{0.0};
    std::vector<std::vector<double>> vals{u0.values};
    std::vector<std::vector<double>> gv{initial_g(A, f, u0)};

    SolveReport rep{Trajectory(u0.grid, tg)};
    rep.trajectory.set_slice(0, u0.values);
    bool chase = false;
    bool underflow_blowup = false;
    std::uint64_t window_index = 0;
    std::vector<double> recent_norms{lp_norm(u0, p)};

    auto record_norm = [&](double n) {
        recent_norms.push_back(n);
        if (recent_norms.size() > 6) recent_norms.erase(recent_norms.begin());
    };
    auto norms_growing = [&]() {
        if (recent_norms.size() < 3) return false;
        for (std::size_t i = 1; i < recent_norms.size(); ++i)
            if (recent_norms[i] <= recent_norms[i - 1]) return false;
        return true;
    };

    while (times.back() < tg.horizon() * (1.0 - 1e-12)) {
        if (window_index >= cfg.max_windows)
            throw std::runtime_error("solve_semilinear: window budget exhausted");
        Field anchor(u0.grid, vals.back());
        double t0 = times.back();
        double r0 = std::max(cfg.r0_floor, cfg.r0_scale * lp_norm(anchor, p));
        bool accepted = false;
        for (int attempt = 0; attempt < cfg.max_ball_retries && !accepted; ++attempt) {
            StepParameters sp = make_step_parameters(
                f, alpha, a_norm, t0, anchor, r0, cfg,
                cfg.seed + 1315423911ull * window_index + static_cast<std::uint64_t>(attempt), p);
            std::vector<double> new_times;
            std::size_t m = static_cast<std::size_t>(std::floor(sp.tau0 / dt));
            if (!chase && m >= 1) {
                for (std::size_t i = 1; i <= m; ++i)
                    new_times.push_back(t0 + dt * static_cast<double>(i));
            } else {
                if (!chase) {
                    chase = true;
                    rep.warnings.push_back(
                        "admissible window fell below the output step; continuing on a refined "
                        "non-uniform sub-grid");
                }
                double sub = sp.tau0 / 4.0;
                if (!(t0 + sub > t0)) {
                    underflow_blowup = true;
                    break;
                }
                for (int i = 1; i <= 4; ++i) new_times.push_back(t0 + sub * i);
            }
            WindowAttempt wa = run_window(A, f, alpha, u0, times, gv, new_times, anchor,
                                          sp.beta, cfg.picard, p);
            if (!(wa.converged && wa.in_ball)) {
                r0 /= 2.0;
                continue;
            }
            wa.stats.window = window_index;
            rep.per_window.push_back(wa.stats);
            for (std::size_t i = 0; i < new_times.size(); ++i) {
                times.push_back(new_times[i]);
                vals.push_back(std::move(wa.values[i]));
                gv.push_back(std::move(wa.gvals[i]));
            }
            accepted = true;
        }
        if (!accepted) {
            if (underflow_blowup || norms_growing()) {
                rep.status = SolveStatus::BlowUp;
                rep.omega_estimate = times.back();
                rep.final_norm = lp_norm(vals.back(), w, p);
                break;
            }
            throw std::runtime_error(
                "solve_semilinear: step rejected after retries without norm growth");
        }
        double end_norm = lp_norm(vals.back(), w, p);
        record_norm(end_norm);
        ++window_index;
        if (end_norm >= blowup_threshold) {
            rep.status = SolveStatus::BlowUp;
            rep.omega_estimate = times.back();
            rep.final_norm = end_norm;
            break;
        }
    }

    // assemble the uniform trajectory, interpolating refined regions when the
    // run completed, and collecting the refined tail on blow-up
    std::vector<bool> filled(N + 1, false);
    filled[0] = true;
    std::size_t last_filled = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        double ratio = times[k] / dt;
        auto idx = static_cast<std::size_t>(std::llround(ratio));
        if (idx <= N && std::abs(ratio - static_cast<double>(idx)) < 1e-9) {
            rep.trajectory.set_slice(idx, vals[k]);
            filled[idx] = true;
            last_filled = std::max(last_filled, idx);
        } else if (rep.status == SolveStatus::BlowUp) {
            rep.chase_tail.emplace_back(times[k], Field(u0.grid, vals[k]));
        }
    }
    if (rep.status == SolveStatus::Completed) {
        bool interpolated = false;
        for (std::size_t n = 1; n <= N; ++n) {
            if (filled[n]) continue;
            double t = dt * static_cast<double>(n);
            auto hi = std::upper_bound(times.begin(), times.end(), t);
            if (hi == times.end()) hi = times.end() - 1;
            auto lo = hi - 1;
            double weight = (t - *lo) / (*hi - *lo);
            std::size_t kl = static_cast<std::size_t>(lo - times.begin());
            std::size_t kh = static_cast<std::size_t>(hi - times.begin());
            auto s = rep.trajectory.slice(n);
            for (std::size_t j = 0; j < nx; ++j)
                s[j] = (1.0 - weight) * vals[kl][j] + weight * vals[kh][j];
            interpolated = true;
        }
        if (interpolated)
            rep.warnings.push_back("output nodes inside the refined region were interpolated");
        rep.final_norm = lp_norm(vals.back(), w, p);
    } else if (last_filled < N) {
        std::size_t steps = std::max<std::size_t>(last_filled, 1);
        Trajectory trunc(u0.grid, TimeGrid::from_step(dt, steps));
        for (std::size_t n = 0; n <= steps; ++n)
            trunc.set_slice(n, rep.trajectory.slice(std::min(n, last_filled)));
        rep.trajectory = std::move(trunc);
        if (last_filled == 0)
            rep.warnings.push_back("blow-up before the first output node; see the refined tail");
    }

    double cmod = 0.0;
    std::vector<double> diff(nx);
    for (std::size_t k = 1; k < times.size(); ++k) {
        double h = times[k] - times[k - 1];
        if (h <= 0.0) continue;
        for (std::size_t j = 0; j < nx; ++j) diff[j] = vals[k][j] - vals[k - 1][j];
        cmod = std::max(cmod, lp_norm(diff, w, p) / std::pow(h, alpha.alpha0()));
    }
    rep.continuity_modulus = cmod;
    return rep;
}

}  // namespace varfrac
