#include <doctest.h>

#include <cmath>

#include "varfrac/gamma_utils.hpp"
#include "varfrac/semilinear_solver.hpp"

using namespace varfrac;

namespace {

SemilinearRhs decay_rhs(double rate) {
    SemilinearRhs f;
    f.evaluator = [rate](double, const Field& u) { return -rate * u; };
    return f;
}

SemilinearRhs quadratic_rhs() {
    SemilinearRhs f;
    f.evaluator = [](double, const Field& u) {
        Field out = u;
        for (auto& v : out.values) v = v * v;
        return out;
    };
    return f;
}

}  // namespace

TEST_CASE("estimate_lipschitz: linear map and constants") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 16);
    Field anchor = Field::constant(g, 1.0);
    double l = estimate_lipschitz(decay_rhs(2.0), 0.0, anchor, 1.0, 32);
    CHECK(l == doctest::Approx(3.0).epsilon(1e-9));  // 1.5 * 2.0, ratio exact for linear f

    SemilinearRhs constf;
    constf.evaluator = [g](double, const Field&) { return Field::constant(g, 4.0); };
    CHECK(estimate_lipschitz(constf, 0.0, anchor, 1.0, 16) == 0.0);

    // quadratic at anchor 5 with r0 = 1: |a+b| stays within the sampled ball
    Field anchor5 = Field::constant(g, 5.0);
    double lq = estimate_lipschitz(quadratic_rhs(), 0.0, anchor5, 1.0, 64);
    CHECK(lq >= 10.0);
    CHECK(lq <= 21.0);  // 1.5 * 2 * (5 + max pointwise excursion)

    SemilinearRhs hinted = decay_rhs(1.0);
    hinted.lipschitz_hint = 7.0;
    CHECK(estimate_lipschitz(hinted, 0.0, anchor, 1.0, 8) == 7.0);
}

TEST_CASE("semilinear step size formula") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 2);
    OrderField one = OrderField::constant(g, 1.0);
    StepParameters sp;
    sp.r0 = 2.0;
    sp.beta = 1.0;
    sp.l0 = 1.0;
    sp.m0 = 0.0;
    // min{2-1, [Gamma(1)/(2(0+1))]^1, [1/(2*0+1)]^1} = min{1, 0.5, 1} = 0.5
    CHECK(semilinear_step_size(one, 0.0, sp) == 0.5);

    OrderField half = OrderField::from_values(g, {0.5, 1.0});
    StepParameters sp2;
    sp2.r0 = 4.0;
    sp2.beta = 2.0;
    sp2.l0 = 0.0;
    sp2.m0 = 0.0;
    // second term: (0.5/ (2||A||))^2 with Gamma(1)=1, ||A||=1 -> 1/16
    CHECK(semilinear_step_size(half, 1.0, sp2) == doctest::Approx(0.0625));
}

TEST_CASE("local_step: f = 0 reduces to the linear fixed point") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 4);
    Field anchor = Field::constant(g, 1.0);
    OrderField alpha = OrderField::constant(g, 0.7);
    SemilinearRhs zero;
    zero.evaluator = [g](double, const Field&) { return Field::constant(g, 0.0); };
    auto A = BoundedOperator::multiplication(Field::constant(g, -1.0));
    LocalStepResult res = local_step(&A, zero, alpha, anchor, 1.0 / 256.0);
    REQUIRE(!res.times.empty());
    for (std::size_t k = 0; k < res.times.size(); ++k) {
        double expected = ml_scalar(0.7, 1.0, -std::pow(res.times[k], 0.7));
        CHECK(std::abs(res.slices[k][0] - expected) <= 1e-4);
    }
    CHECK(res.stats.contraction_ratio <= 0.55);
}

TEST_CASE("solve_semilinear: trivial and relaxation runs") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 4);
    Field u0 = Field::constant(g, 1.0);
    OrderField alpha = OrderField::constant(g, 0.7);

    SemilinearRhs zero;
    zero.evaluator = [g](double, const Field&) { return Field::constant(g, 0.0); };
    TimeGrid tg(1.0, 64);
    SolveReport rep = solve_semilinear(nullptr, zero, alpha, u0, tg, 1e8);
    CHECK(rep.status == SolveStatus::Completed);
    for (std::size_t n = 0; n <= 64; ++n) CHECK(rep.trajectory.at(n, 0) == doctest::Approx(1.0));

    // f = -u relaxes like the scalar Mittag-Leffler function
    TimeGrid tg2(1.0, 512);
    SolveReport rel = solve_semilinear(nullptr, decay_rhs(1.0), alpha, u0, tg2, 1e8);
    CHECK(rel.status == SolveStatus::Completed);
    double worst = 0.0;
    for (std::size_t n = 0; n <= 512; n += 32) {
        double expected = ml_scalar(0.7, 1.0, -std::pow(tg2.node(n), 0.7));
        worst = std::max(worst, std::abs(rel.trajectory.at(n, 1) - expected));
    }
    CHECK(worst <= 1e-3);
    double prev = 1e18;
    for (std::size_t n = 0; n <= 512; ++n) {
        double nn = lp_norm(rel.trajectory.field_at(n), 2.0);
        CHECK(nn <= prev + 1e-12);
        prev = nn;
    }
    for (const auto& ws : rel.per_window) CHECK(ws.contraction_ratio <= 0.55);
}

TEST_CASE("solve_semilinear: prefix reproducibility") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 3);
    Field u0 = Field::constant(g, 1.0);
    OrderField alpha = OrderField::constant(g, 0.6);
    TimeGrid whole(2.0, 256);
    TimeGrid half(1.0, 128);  // same dt
    SolveReport full = solve_semilinear(nullptr, decay_rhs(0.8), alpha, u0, whole, 1e8);
    SolveReport pre = solve_semilinear(nullptr, decay_rhs(0.8), alpha, u0, half, 1e8);
    for (std::size_t n = 0; n <= 128; ++n)
        for (std::size_t j = 0; j < g->size(); ++j)
            CHECK(full.trajectory.at(n, j) == pre.trajectory.at(n, j));
}

TEST_CASE("solve_semilinear: quadratic blow-up is reported with the threshold met") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 1);
    Field u0 = Field::constant(g, 5.0);
    OrderField alpha = OrderField::constant(g, 0.7);
    TimeGrid tg(3.0, 512);
    SolveReport rep = solve_semilinear(nullptr, quadratic_rhs(), alpha, u0, tg, 1e8);
    CHECK(rep.status == SolveStatus::BlowUp);
    CHECK(rep.omega_estimate < 2.0);
    CHECK(rep.omega_estimate > 0.0);
    CHECK(rep.final_norm >= 1e8);
    // the reported trajectory stays below the threshold; the chased tail crosses it
    for (std::size_t n = 0; n < rep.trajectory.num_slices(); ++n)
        CHECK(lp_norm(rep.trajectory.field_at(n), 2.0) < 1e8);
    CHECK(!rep.chase_tail.empty());

    CHECK_THROWS_AS(solve_semilinear(nullptr, quadratic_rhs(), alpha, u0, tg, 1.0),
                    std::invalid_argument);
}

TEST_CASE("solve_semilinear: window residual and ball containment stats") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 4);
    Field u0 = Field::constant(g, 1.0);
    OrderField alpha = OrderField::linear(g, 0.5, 0.9);
    auto A = BoundedOperator::multiplication(Field::constant(g, 0.4));
    SemilinearRhs f = decay_rhs(0.5);
    TimeGrid tg(1.0, 256);
    SolveReport rep = solve_semilinear(&A, f, alpha, u0, tg, 1e8);
    CHECK(rep.status == SolveStatus::Completed);
    for (const auto& ws : rep.per_window) {
        CHECK(ws.iterations >= 1);
        CHECK(ws.contraction_ratio <= 0.55);
    }
    // fixed-point residual: compare against apply_T with forcing f(., u)
    Trajectory fu(g, tg);
    std::vector<double> tmp(g->size());
    for (std::size_t n = 0; n <= 256; ++n) {
        Field fn = f.evaluator(tg.node(n), rep.trajectory.field_at(n));
        fu.set_slice(n, fn.values);
    }
    Trajectory tu = apply_T(rep.trajectory, A, alpha, u0, &fu);
    double scale = rep.trajectory.sup_lp_norm(2.0);
    CHECK(sup_lp_distance(rep.trajectory, tu, 2.0) <= 10.0 * 1e-10 * scale);
}
