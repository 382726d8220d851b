#include <doctest.h>

#include <cmath>
#include <random>

#include "varfrac/gamma_utils.hpp"
#include "varfrac/mittag_leffler.hpp"

using namespace varfrac;

TEST_CASE("ml k_star") {
    CHECK(ml_k_star(1.0) == 1);
    CHECK(ml_k_star(0.5) == 1);
    CHECK(ml_k_star(0.05) == 10);
}

TEST_CASE("ml_scalar: exponential case to 1e-12 on |z| <= 20") {
    for (double z = -20.0; z <= 20.0; z += 0.5) {
        double got = ml_scalar(1.0, 1.0, z);
        CHECK(std::abs(got - std::exp(z)) <= 1e-12 * std::exp(z));
    }
}

TEST_CASE("ml_scalar: value at zero and erfc identity") {
    CHECK(ml_scalar(0.7, 1.3, 0.0) == doctest::Approx(1.0 / gamma_fn(1.3)).epsilon(1e-14));
    // E_{1/2,1}(-1) = e * erfc(1)
    double oracle = std::exp(1.0) * std::erfc(1.0);
    CHECK(std::abs(ml_scalar(0.5, 1.0, -1.0) - oracle) <= 1e-10);
}

TEST_CASE("ml_scalar: argument guard raises with partial value") {
    CHECK_THROWS_AS(ml_scalar(0.2, 1.0, 1e9), MlUnconvergedError);
    CHECK_THROWS_AS(ml_scalar(1.5, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ml_scalar(0.5, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("ml_scalar: nonnegative arguments give monotone partial sums") {
    // all series terms nonnegative for z >= 0: value must dominate truncations
    for (double a : {0.4, 0.8, 1.0}) {
        double prev = 0.0;
        for (double z : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            double v = ml_scalar(a, 1.0, z);
            CHECK(v >= prev);  // monotone in z for nonnegative series
            prev = v;
        }
    }
}

TEST_CASE("ml_operator_apply: zero operator and scalar cross-check") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 16);
    Field u0(g, std::vector<double>(g->points()));
    OrderField alpha = OrderField::linear(g, 0.5, 0.9);
    Field out = ml_operator_apply(alpha, 2.5, BoundedOperator::zero(g), u0);
    for (std::size_t j = 0; j < u0.size(); ++j) CHECK(out[j] == u0[j]);

    // multiplication psi = lambda, constant alpha -> pointwise scalar series
    double lambda = -0.8;
    auto A = BoundedOperator::multiplication(Field::constant(g, lambda));
    OrderField ac = OrderField::constant(g, 0.6);
    for (double t : {0.3, 1.0, 2.0}) {
        Field got = ml_operator_apply(ac, t, A, u0);
        for (std::size_t j = 0; j < u0.size(); ++j) {
            double expected = ml_scalar(0.6, 1.0, std::pow(t, 0.6) * lambda) * u0[j];
            CHECK(std::abs(got[j] - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("ml_operator_apply: variable alpha matches per-point scalar series") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 12);
    OrderField alpha = OrderField::linear(g, 0.4, 1.0);
    Field psi(g, std::vector<double>(g->size()));
    for (std::size_t j = 0; j < psi.size(); ++j)
        psi[j] = -1.2 + 2.0 * g->points()[j] / 1.0 * 0.9;
    auto A = BoundedOperator::multiplication(psi);
    Field u0 = Field::constant(g, 1.0);
    for (double t : {0.5, 1.5}) {
        Field got = ml_operator_apply(alpha, t, A, u0);
        for (std::size_t j = 0; j < u0.size(); ++j) {
            double a = alpha.value(j);
            double expected = ml_scalar(a, 1.0, std::pow(t, a) * psi[j]);
            CHECK(std::abs(got[j] - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
        }
    }
}

TEST_CASE("growth envelope: anchors") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 4);
    OrderField alpha = OrderField::constant(g, 1.0);
    // t = 0 returns the constant M >= 1
    CHECK(growth_envelope(alpha, 1.0, 0.0) >= 1.0);
    // alpha = 1, norm 1: envelope dominates e^t
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0})
        CHECK(growth_envelope(alpha, 1.0, t) >= std::exp(t));
}

TEST_CASE("growth envelope dominates the operator series on random samples") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ua(0.4, 0.95);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::uniform_real_distribution<double> ut(0.0, 3.0);
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 10);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        double a0 = ua(rng);
        double sup = a0 + (1.0 - a0) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        OrderField alpha = OrderField::linear(g, a0, sup);
        Field psi(g, std::vector<double>(g->size()));
        for (auto& v : psi.values) v = 2.0 * unif(rng);
        bool use_volterra = (trial % 3 == 0);
        BoundedOperator A =
            use_volterra ? BoundedOperator::volterra(g) : BoundedOperator::multiplication(psi);
        Field u0(g, std::vector<double>(g->size()));
        for (auto& v : u0.values) v = unif(rng);
        double t = ut(rng);
        Field val = ml_operator_apply(alpha, t, A, u0);
        double bound = growth_envelope(alpha, A.norm_estimate(2.0), t) * lp_norm(u0, 2.0);
        if (lp_norm(val, 2.0) > bound * (1.0 + 1e-12)) ++violations;
    }
    CHECK(violations == 0);
}
