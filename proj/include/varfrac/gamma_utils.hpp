#pragma once

namespace varfrac {

// Location and value of the minimum of the Gamma function on (0, inf).
struct GammaMinimum {
    static constexpr double eta = 1.4616321449683623;
    static constexpr double gamma_at_eta = 0.8856031944108887;
};

// Gamma and log-Gamma for positive arguments, relative error <= 1e-12.
double gamma_fn(double x);
double log_gamma(double x);

// g_beta(t) = t^{beta-1}/Gamma(beta) for t > 0, 0 for t <= 0. Throws on beta <= 0.
double g_beta(double t, double beta);

}  // namespace varfrac
