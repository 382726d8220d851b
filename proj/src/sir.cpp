#include "varfrac/sir.hpp"

#include <cmath>
#include <stdexcept>

namespace varfrac {

namespace {

// Composite grid for the stacked (S, I, R) state: three copies of the physical
// grid shifted apart so the points stay strictly increasing. Only weights and
// ordering matter for the solver; the physical coordinates are recovered by
// unstacking.
SpatialGridPtr stacked_grid(const SpatialGridPtr& g) {
    std::size_t n = g->size();
    double shift = g->measure() * 2.0;
    std::vector<double> pts(3 * n), w(3 * n);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t j = 0; j < n; ++j) {
            pts[c * n + j] = g->points()[j] + shift * static_cast<double>(c);
            w[c * n + j] = g->weights()[j];
        }
    return std::make_shared<const SpatialGrid>(std::move(pts), std::move(w), g->left(),
                                               g->right() + 2.0 * shift);
}

Field stack_state(const SirState& st, const SpatialGridPtr& sg) {
    std::size_t n = st.s.size();
    std::vector<double> v(3 * n);
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = st.s.values[j];
        v[n + j] = st.i.values[j];
        v[2 * n + j] = st.r.values[j];
    }
    return Field(sg, std::move(v));
}

SirState unstack_state(const Field& f, const SpatialGridPtr& g) {
    std::size_t n = g->size();
    SirState st;
    st.s = Field(g, std::vector<double>(f.values.begin(), f.values.begin() + n));
    st.i = Field(g, std::vector<double>(f.values.begin() + n, f.values.begin() + 2 * n));
    st.r = Field(g, std::vector<double>(f.values.begin() + 2 * n, f.values.end()));
    return st;
}

}  // namespace

SirState sir_rhs(double /*t*/, const SirState& state, const SirParams& params) {
    const auto& g = state.s.grid;
    std::size_t n = g->size();
    SirState out;
    out.s = Field(g, std::vector<double>(n));
    out.i = Field(g, std::vector<double>(n));
    out.r = Field(g, std::vector<double>(n));
    std::vector<double> coupling(n);
    if (params.coupling == SirCoupling::NonlocalPaper) {
        BoundedOperator vol = BoundedOperator::volterra(g);
        vol.apply(state.i.values, coupling);
    } else {
        coupling = state.i.values;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double infect_local = params.beta * state.s.values[j] * state.i.values[j];
        double infect_coupled = params.beta * state.s.values[j] * coupling[j];
        double recover = params.gamma * state.i.values[j];
        if (params.coupling == SirCoupling::LocalClassical) {
            out.s.values[j] = -infect_local;
            out.i.values[j] = infect_local - recover;
            out.r.values[j] = recover;
        } else {
            out.s.values[j] = -infect_local;
            out.i.values[j] = infect_coupled - recover;
            out.r.values[j] = recover;
        }
    }
    return out;
}

SirReport simulate_sir(const SirState& initial, const SirParams& params,
                       const OrderField& alpha, const TimeGrid& tg, double blowup_threshold,
                       const SemilinearConfig& cfg, double p) {
    const auto& g = initial.s.grid;
    std::size_t n = g->size();
    if (initial.i.size() != n || initial.r.size() != n)
        throw std::invalid_argument("simulate_sir: compartments must share one grid");
    for (std::size_t j = 0; j < n; ++j)
        if (initial.s.values[j] < 0.0 || initial.i.values[j] < 0.0 || initial.r.values[j] < 0.0)
            throw std::invalid_argument("simulate_sir: initial data must be nonnegative");
    if (!(params.beta >= 0.0) || !(params.gamma >= 0.0))
        throw std::invalid_argument("simulate_sir: rates must be nonnegative");

    SpatialGridPtr sg = stacked_grid(g);
    std::vector<double> av(alpha.values());
    std::vector<double> stacked_alpha(3 * n);
    for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t j = 0; j < n; ++j) stacked_alpha[c * n + j] = av[j];
    OrderField alpha3 = OrderField::from_values(sg, std::move(stacked_alpha));

    SemilinearRhs rhs;
    rhs.evaluator = [&params, &g, &sg](double t, const Field& u) {
        SirState st = unstack_state(u, g);
        return stack_state(sir_rhs(t, st, params), sg);
    };

    Field u0 = stack_state(initial, sg);
    SolveReport rep = solve_semilinear(nullptr, rhs, alpha3, u0, tg, blowup_threshold, cfg, p);

    SirReport out;
    out.status = rep.status;
    out.per_window = std::move(rep.per_window);
    out.warnings = std::move(rep.warnings);
    out.final_norm = rep.final_norm;
    out.omega_estimate = rep.omega_estimate;

    BoundedOperator vol = BoundedOperator::volterra(g);
    std::vector<double> cum(n), defect(n), total(n);
    const double minimum_state = -1e-6;
    bool resolution_warned = false;
    for (std::size_t k = 0; k < rep.trajectory.num_slices(); ++k) {
        double t = rep.trajectory.time().node(k);
        SirState st = unstack_state(rep.trajectory.field_at(k), g);
        for (std::size_t j = 0; j < n; ++j) {
            if (!resolution_warned &&
                (st.s.values[j] < minimum_state || st.i.values[j] < minimum_state ||
                 st.r.values[j] < minimum_state)) {
                out.warnings.push_back(
                    "compartment dipped below -1e-6; scheme resolution insufficient");
                resolution_warned = true;
            }
        }
        vol.apply(st.i.values, cum);
        for (std::size_t j = 0; j < n; ++j) {
            defect[j] = params.beta * st.s.values[j] * (cum[j] - st.i.values[j]);
            total[j] = st.s.values[j] + st.i.values[j] + st.r.values[j];
        }
        out.defect_norm.push_back(params.coupling == SirCoupling::NonlocalPaper
                                      ? lp_norm(defect, g->weights(), p)
                                      : 0.0);
        out.total_norm.push_back(lp_norm(total, g->weights(), p));
        out.times.push_back(t);
        out.states.push_back(std::move(st));
    }
    return out;
}

}  // namespace varfrac
