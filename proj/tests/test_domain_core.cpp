#include <doctest.h>

#include <cmath>
#include <random>

#include "varfrac/field.hpp"
#include "varfrac/operators.hpp"

using namespace varfrac;

namespace {
const double kInf = std::numeric_limits<double>::infinity();

Field random_field(const SpatialGridPtr& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    Field f(g, std::vector<double>(g->size()));
    for (auto& v : f.values) v = unif(rng);
    return f;
}
}  // namespace

TEST_CASE("uniform grid satisfies the measure identity") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 97);
    double sum = 0.0;
    for (double w : g->weights()) sum += w;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    for (std::size_t j = 1; j < g->size(); ++j) CHECK(g->points()[j] > g->points()[j - 1]);
}

TEST_CASE("grid construction rejects bad input") {
    CHECK_THROWS_AS(SpatialGrid({1.0, 0.5}, {0.5, 0.5}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpatialGrid({0.2, 0.5}, {0.5, -0.5}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TimeGrid(0.0, 4), std::invalid_argument);
}

TEST_CASE("order field validates bounds and regions") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 8);
    CHECK_THROWS_AS(OrderField::constant(g, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(OrderField::constant(g, 0.0), std::invalid_argument);
    auto pw = OrderField::piecewise(g, {{0.0, 0.5, 0.3}, {0.5, 1.0, 0.7}});
    CHECK(pw.alpha0() == 0.3);
    CHECK(pw.sup() == 0.7);
    CHECK(pw.regions().has_value());
    // regions must tile the domain
    CHECK_THROWS_AS(OrderField::piecewise(g, {{0.0, 0.4, 0.3}}), std::invalid_argument);
}

TEST_CASE("lp_norm basics") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 64);
    CHECK(lp_norm(Field::constant(g, 0.0), 2.0) == 0.0);
    CHECK(lp_norm(Field::constant(g, 1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-13));
    // u(x) = x on [0,1], p = 2 -> 1/sqrt(3) within quadrature error
    Field u(g, std::vector<double>(g->points()));
    CHECK(lp_norm(u, 2.0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-4));
    CHECK(lp_norm(Field::constant(g, -2.0), kInf) == 2.0);
    CHECK_THROWS_AS(lp_norm(u, 0.5), std::invalid_argument);
}

TEST_CASE("lp_norm triangle inequality and homogeneity on random pairs") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 32);
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> scale(-3.0, 3.0);
    for (double p : {1.0, 2.0, 3.5, kInf}) {
        for (int trial = 0; trial < 2500; ++trial) {
            Field a = random_field(g, rng);
            Field b = random_field(g, rng);
            double lhs = lp_norm(a + b, p);
            CHECK(lhs <= lp_norm(a, p) + lp_norm(b, p) + 1e-10);
            double c = scale(rng);
            CHECK(std::abs(lp_norm(c * a, p) - std::abs(c) * lp_norm(a, p)) <= 1e-10);
        }
    }
}

TEST_CASE("apply_operator: multiplication and volterra") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 200);
    auto ident = BoundedOperator::multiplication(Field::constant(g, 1.0));
    std::mt19937_64 rng(5);
    Field u = random_field(g, rng);
    Field iu = ident.apply(u);
    for (std::size_t j = 0; j < u.size(); ++j) CHECK(iu[j] == u[j]);

    auto vol = BoundedOperator::volterra(g);
    Field ones = Field::constant(g, 1.0);
    Field cum = vol.apply(ones);
    CHECK(cum[0] == 0.0);  // left endpoint
    for (std::size_t j = 0; j < g->size(); ++j)
        CHECK(std::abs(cum[j] - g->points()[j]) <= 6e-3);
    // iterated cumulative integral of 1 -> x^2/2
    Field cum2 = vol.apply(cum);
    for (std::size_t j = 0; j < g->size(); ++j) {
        double x = g->points()[j];
        CHECK(std::abs(cum2[j] - x * x / 2.0) <= 6e-3);
    }
}

TEST_CASE("apply_operator linearity on random samples") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 40);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::vector<double> m(g->size() * g->size());
    for (auto& v : m) v = coef(rng);
    std::vector<BoundedOperator> ops{
        BoundedOperator::multiplication(random_field(g, rng)),
        BoundedOperator::volterra(g),
        BoundedOperator::dense(g, m),
    };
    for (const auto& A : ops) {
        for (int trial = 0; trial < 200; ++trial) {
            Field u = random_field(g, rng);
            Field v = random_field(g, rng);
            double a = coef(rng), b = coef(rng);
            Field lhs = A.apply(a * u + b * v);
            Field rhs = a * A.apply(u) + b * A.apply(v);
            double scale = std::max(lp_norm(lhs, 2.0), 1.0);
            CHECK(lp_norm(lhs - rhs, 2.0) / scale <= 1e-12);
        }
    }
}

TEST_CASE("estimate_operator_norm") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 50);
    auto mul = BoundedOperator::multiplication(Field::constant(g, -3.5));
    for (double p : {1.0, 2.0, kInf}) CHECK(mul.norm_estimate(p) == 3.5);
    CHECK(mul.norm_is_exact());

    auto vol = BoundedOperator::volterra(g);
    CHECK(vol.norm_estimate(2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(!vol.norm_is_exact());

    std::vector<double> eye(g->size() * g->size(), 0.0);
    for (std::size_t j = 0; j < g->size(); ++j) eye[j * g->size() + j] = 1.0;
    auto ident = BoundedOperator::dense(g, eye);
    CHECK(std::abs(ident.norm_estimate(2.0) - 1.0) <= 1e-10);
    CHECK(ident.norm_estimate(kInf) == doctest::Approx(1.0));
    CHECK(ident.norm_estimate(1.0) == doctest::Approx(1.0));
}

TEST_CASE("norm estimate dominates random applications") {
    auto g = SpatialGrid::uniform_cells(0.0, 1.0, 64);
    std::mt19937_64 rng(23);
    std::vector<BoundedOperator> ops{
        BoundedOperator::multiplication(random_field(g, rng)),
        BoundedOperator::volterra(g),
    };
    for (double p : {1.0, 2.0, kInf}) {
        for (const auto& A : ops) {
            double bound = A.norm_estimate(p);
            for (int trial = 0; trial < 300; ++trial) {
                Field u = random_field(g, rng);
                CHECK(lp_norm(A.apply(u), p) <= bound * lp_norm(u, p) + 1e-10);
            }
        }
    }
}
