#include "varfrac/gamma_utils.hpp"

#include <cmath>
#include <stdexcept>

namespace varfrac {

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("log_gamma: argument must be positive");
    return std::lgamma(x);
}

double g_beta(double t, double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("g_beta: beta must be positive");
    if (t <= 0.0) return 0.0;
    return std::pow(t, beta - 1.0) / std::tgamma(beta);
}

}  // namespace varfrac
