#include "varfrac/bounds.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <tuple>

#include "varfrac/gamma_utils.hpp"

namespace varfrac {

std::pair<double, double> kernel_pointwise_bounds(const OrderField& alpha, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("kernel_pointwise_bounds: s must be positive");
    double lo = std::pow(s, alpha.sup() - 1.0);
    double hi = std::pow(s, alpha.alpha0() - 1.0);
    if (s >= 1.0) std::swap(lo, hi);
    return {lo, hi};
}

double kernel_difference_bound(const OrderField& alpha, double s1, double s2) {
    if (!(s1 > 0.0) || !(s2 > 0.0))
        throw std::invalid_argument("kernel_difference_bound: arguments must be positive");
    double a0 = alpha.alpha0();
    double su = alpha.sup();
    return std::abs(std::pow(s2, a0 - 1.0) - std::pow(s1, a0 - 1.0)) / a0 +
           std::abs(std::pow(s2, su - 1.0) - std::pow(s1, su - 1.0)) / su;
}

PowerPredicates lemma_predicates(double theta, double gamma, double beta, double y) {
    if (!(0.0 < theta && theta < gamma && gamma < 1.0))
        throw std::invalid_argument("lemma_predicates: need 0 < theta < gamma < 1");
    if (!(beta >= theta && beta <= gamma))
        throw std::invalid_argument("lemma_predicates: beta must lie in [theta, gamma]");
    if (!(y > 0.0)) throw std::invalid_argument("lemma_predicates: y must be positive");
    PowerPredicates out;
    double rhs = (1.0 - theta) / theta * std::pow(y, theta) +
                 (1.0 - gamma) / gamma * std::pow(y, gamma);
    out.envelope_holds = (1.0 - beta) * std::pow(y, beta) <= rhs;
    double ylo = std::exp(1.0 / (1.0 - theta));
    double yhi = std::exp(1.0 / (1.0 - gamma));
    if (y >= ylo && y <= yhi)
        out.combination_positive = rhs - y / (std::exp(1.0) * std::log(y)) > 0.0;
    return out;
}

double integral_operator_bound(const OrderField& alpha, double T) {
    if (!(T >= 0.0)) throw std::invalid_argument("integral_operator_bound: T must be >= 0");
    if (T == 0.0) return 0.0;
    double a0 = alpha.alpha0();
    double su = alpha.sup();
    return (std::pow(T, a0) / a0 + std::pow(T, su) / su) / gamma_fn(su);
}

std::vector<InequalitySuiteResult> run_inequality_suites(long samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("run_inequality_suites: samples must be >= 1");
    std::vector<InequalitySuiteResult> out;

    auto run = [&](const std::string& name, auto&& margin_fn) {
        InequalitySuiteResult r;
        r.predicate = name;
        r.samples = samples;
        r.worst_margin = std::numeric_limits<double>::infinity();
        std::mt19937_64 rng(seed ^ std::hash<std::string>{}(name));
        for (long i = 0; i < samples; ++i) {
            auto [margin, scale] = margin_fn(rng);
            r.worst_margin = std::min(r.worst_margin, margin);
            if (margin < -1e-12 * std::max(1.0, scale)) ++r.violations;
        }
        out.push_back(std::move(r));
    };

    using Rng = std::mt19937_64;
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> ua(0.05, 0.95);
    std::uniform_real_distribution<double> us(-6.0, 6.0);
    auto draw_orders = [&](Rng& rng) {
        double a0 = ua(rng);
        double sup = a0 + (1.0 - a0) * u01(rng);
        double aj = a0 + (sup - a0) * u01(rng);
        return std::tuple{a0, aj, sup};
    };

    run("gamma-ordering", [&](Rng& rng) {
        auto [a0, aj, sup] = draw_orders(rng);
        double ge = GammaMinimum::gamma_at_eta;
        double g0 = gamma_fn(a0), gj = gamma_fn(aj), gs = gamma_fn(sup);
        double margin = std::min({gs - ge, gj - gs, g0 - gj});
        return std::pair{margin, std::max({g0, gj, gs})};
    });

    run("kernel-bound-below-one", [&](Rng& rng) {
        auto [a0, aj, sup] = draw_orders(rng);
        double s = std::exp(-std::abs(us(rng)));
        double lo = std::pow(s, sup - 1.0), hi = std::pow(s, a0 - 1.0);
        double v = std::pow(s, aj - 1.0);
        return std::pair{std::min(v - lo, hi - v), std::max(hi, 1.0)};
    });

    run("kernel-bound-above-one", [&](Rng& rng) {
        auto [a0, aj, sup] = draw_orders(rng);
        double s = std::exp(std::abs(us(rng)));
        double lo = std::pow(s, a0 - 1.0), hi = std::pow(s, sup - 1.0);
        double v = std::pow(s, aj - 1.0);
        return std::pair{std::min(v - lo, hi - v), std::max(hi, 1.0)};
    });

    run("kernel-difference", [&](Rng& rng) {
        auto [a0, aj, sup] = draw_orders(rng);
        double s1 = std::exp(us(rng)), s2 = std::exp(us(rng));
        double bound = std::abs(std::pow(s2, a0 - 1.0) - std::pow(s1, a0 - 1.0)) / a0 +
                       std::abs(std::pow(s2, sup - 1.0) - std::pow(s1, sup - 1.0)) / sup;
        double truth = std::abs(std::pow(s2, aj - 1.0) - std::pow(s1, aj - 1.0));
        return std::pair{bound - truth, std::max(1.0, truth)};
    });

    // the positivity predicate is evaluated literally on its stated interval;
    // gamma is capped so e^{1/(1-gamma)} stays within double range
    run("power-positivity", [&](Rng& rng) {
        double theta = ua(rng);
        double gmax = std::min(0.96, theta + 0.9 * (1.0 - theta));
        double gamma = theta + (gmax - theta) * (0.01 + 0.99 * u01(rng));
        double ylo = std::exp(1.0 / (1.0 - theta));
        double yhi = std::exp(1.0 / (1.0 - gamma));
        double y = ylo + (yhi - ylo) * u01(rng);
        double lhs = (1.0 - theta) / theta * std::pow(y, theta) +
                     (1.0 - gamma) / gamma * std::pow(y, gamma) -
                     y / (std::exp(1.0) * std::log(y));
        return std::pair{lhs, y / std::log(y)};
    });

    run("power-envelope", [&](Rng& rng) {
        double theta = ua(rng);
        double gamma = theta + (1.0 - theta) * (0.01 + 0.98 * u01(rng));
        double beta = theta + (gamma - theta) * u01(rng);
        double y = std::exp(us(rng));
        double rhs = (1.0 - theta) / theta * std::pow(y, theta) +
                     (1.0 - gamma) / gamma * std::pow(y, gamma);
        double lhs = (1.0 - beta) * std::pow(y, beta);
        return std::pair{rhs - lhs, std::max(1.0, rhs)};
    });

    return out;
}

}  // namespace varfrac
