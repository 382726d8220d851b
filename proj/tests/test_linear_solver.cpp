#include <doctest.h>

#include <cmath>

#include "varfrac/gamma_utils.hpp"
#include "varfrac/linear_solver.hpp"

using namespace varfrac;

namespace {
OrderField const_alpha(const SpatialGridPtr& g, double a) { return OrderField::constant(g, a); }
}  // namespace

TEST_CASE("picard_step_size formula") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 2);
    // alpha0 = 1/2, sup = 1, ||A|| = 1 -> (1/4)^2 = 0.0625 exactly
    OrderField a = OrderField::from_values(g, {0.5, 1.0});
    CHECK(picard_step_size(a, 1.0) == 0.0625);
    CHECK(picard_step_size(a, 0.0) == 0.5);
    OrderField one = OrderField::constant(g, 1.0);
    CHECK(picard_step_size(one, 1.0) == 0.5);
}

TEST_CASE("apply_T: fixed point at zero operator and first iterate") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 8);
    TimeGrid tg(1.0, 64);
    Field u0 = Field::constant(g, 2.0);
    OrderField alpha = OrderField::linear(g, 0.4, 0.9);
    Trajectory uconst(g, tg);
    for (std::size_t n = 0; n <= 64; ++n) uconst.set_slice(n, u0.values);

    Trajectory t0 = apply_T(uconst, BoundedOperator::zero(g), alpha, u0);
    CHECK(sup_lp_distance(t0, uconst, 2.0) <= 1e-14);

    // multiplication by lambda: first Picard iterate u0 (1 + lambda t^a / Gamma(a+1))
    double lambda = 0.7;
    auto A = BoundedOperator::multiplication(Field::constant(g, lambda));
    Trajectory t1 = apply_T(uconst, A, alpha, u0);
    for (std::size_t n = 0; n <= 64; n += 16)
        for (std::size_t j = 0; j < g->size(); ++j) {
            double a = alpha.value(j);
            double expected =
                2.0 * (1.0 + lambda * std::pow(tg.node(n), a) / gamma_fn(a + 1.0));
            CHECK(std::abs(t1.at(n, j) - expected) <= 1e-12 * std::abs(expected));
        }

    // pure forcing: u0 = 0, A = 0 -> J^alpha g
    Trajectory forcing = sample_trajectory(g, tg, [](double t, double) { return std::cos(t); });
    Field zero = Field::constant(g, 0.0);
    Trajectory t2 = apply_T(uconst, BoundedOperator::zero(g), alpha, zero, &forcing);
    Trajectory ji = frac_integral(forcing, alpha, Scheme::L1Linear);
    CHECK(sup_lp_distance(t2, ji, 2.0) <= 1e-14);
}

TEST_CASE("solve_linear: zero operator returns the constant trajectory") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 8);
    TimeGrid tg(1.0, 32);
    Field u0(g, std::vector<double>(g->points()));
    OrderField alpha = OrderField::linear(g, 0.5, 0.8);
    SolveReport rep = solve_linear(BoundedOperator::zero(g), alpha, u0, tg);
    CHECK(rep.status == SolveStatus::Completed);
    for (std::size_t n = 0; n <= 32; ++n)
        for (std::size_t j = 0; j < g->size(); ++j) CHECK(rep.trajectory.at(n, j) == u0[j]);
    // slice 0 equals the initial datum bitwise
    CHECK(rep.trajectory.at(0, 3) == u0[3]);
}

TEST_CASE("solve_linear matches the scalar Mittag-Leffler solution") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 4);
    TimeGrid tg(1.0, 1024);
    Field u0 = Field::constant(g, 1.0);
    OrderField alpha = const_alpha(g, 0.6);
    auto A = BoundedOperator::multiplication(Field::constant(g, -1.0));
    SolveReport rep = solve_linear(A, alpha, u0, tg);
    CHECK(rep.status == SolveStatus::Completed);
    double worst = 0.0;
    for (std::size_t n = 0; n <= 1024; n += 64) {
        double expected = ml_scalar(0.6, 1.0, -std::pow(tg.node(n), 0.6));
        worst = std::max(worst, std::abs(rep.trajectory.at(n, 1) - expected));
    }
    CHECK(worst <= 1e-3);
    // windowed contraction observed within the guaranteed factor
    for (const auto& ws : rep.per_window) CHECK(ws.contraction_ratio <= 0.55);
    CHECK(rep.residual <= 10.0 * 1e-10 * rep.trajectory.sup_lp_norm(2.0));
}

TEST_CASE("solve_linear uniqueness probe: two initial iterates agree") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 4);
    TimeGrid tg(1.0, 256);
    Field u0 = Field::constant(g, 1.0);
    OrderField alpha = OrderField::linear(g, 0.5, 0.9);
    auto A = BoundedOperator::multiplication(Field::constant(g, -0.9));
    PicardConfig c1;
    PicardConfig c2;
    c2.initial_iterate = PicardConfig::InitialIterate::Zero;
    SolveReport r1 = solve_linear(A, alpha, u0, tg, c1);
    SolveReport r2 = solve_linear(A, alpha, u0, tg, c2);
    double scale = r1.trajectory.sup_lp_norm(2.0);
    CHECK(sup_lp_distance(r1.trajectory, r2.trajectory, 2.0) <= 10.0 * 1e-10 * scale);
}

TEST_CASE("commute_check distinguishes the operator kinds") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 32);
    OrderField varying = OrderField::linear(g, 0.4, 0.9);
    OrderField constant = const_alpha(g, 0.6);

    Field psi(g, std::vector<double>(g->size()));
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = std::sin(3.0 * g->points()[j]);
    CHECK(commute_check(BoundedOperator::multiplication(psi), varying, 64).commutes);

    auto vol = BoundedOperator::volterra(g);
    CHECK(!commute_check(vol, varying, 64).commutes);
    CHECK(commute_check(vol, constant, 64).commutes);
}

TEST_CASE("series solution agrees with the Picard solver for commuting operators") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 8);
    TimeGrid tg(1.0, 1024);
    Field u0 = Field::constant(g, 1.0);
    OrderField alpha = OrderField::linear(g, 0.5, 0.8);
    Field psi(g, std::vector<double>(g->size()));
    for (std::size_t j = 0; j < psi.size(); ++j) psi[j] = -(0.4 + 0.4 * g->points()[j]);
    auto A = BoundedOperator::multiplication(psi);
    SolveReport rep = solve_linear(A, alpha, u0, tg);
    Trajectory series = series_solution(A, alpha, u0, tg);
    CHECK(sup_lp_distance(rep.trajectory, series, 2.0) <= 1e-4);
}

TEST_CASE("volterra example: consistency oracles") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 64);
    Field u0 = Field::constant(g, 1.0);

    // zero initial datum -> zero everywhere
    TimeGrid tg(1.0, 128);
    Trajectory z = volterra_example_solution(0.5, 0.8, Field::constant(g, 0.0), tg);
    CHECK(z.sup_lp_norm(2.0) == 0.0);

    // equal orders: the split is artificial, must match the full operator series
    TimeGrid tg2(1.0, 512);
    double a = 0.6;
    Trajectory split = volterra_example_solution(a, a, u0, tg2);
    OrderField ac = const_alpha(g, a);
    std::vector<std::string> warnings;
    Trajectory series = series_solution(BoundedOperator::volterra(g), ac, u0, tg2,
                                        MlSeriesControl{}, 2.0, &warnings);
    CHECK(sup_lp_distance(split, series, 2.0) <= 1e-6);
}

TEST_CASE("solution operator bound for piecewise-constant alpha") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 16);
    OrderField pw = OrderField::piecewise(g, {{0.0, 0.5, 0.5}, {0.5, 1.0, 0.9}});
    auto A = BoundedOperator::multiplication(Field::constant(g, 1.0));
    std::vector<double> times{0.5, 1.0, 2.0};
    OperatorBoundReport rep = solution_operator_bound_check(A, pw, times, 100);
    CHECK(rep.violations == 0);
    CHECK(rep.lambda == doctest::Approx(1.0));

    // A = 0: ||S(t)|| = 1 <= M
    OperatorBoundReport rep0 =
        solution_operator_bound_check(BoundedOperator::zero(g), pw, times, 10);
    CHECK(rep0.violations == 0);

    OrderField no_regions = OrderField::linear(g, 0.5, 0.9);
    CHECK_THROWS_AS(solution_operator_bound_check(A, no_regions, times, 3),
                    std::invalid_argument);
}
