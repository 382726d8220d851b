#include "varfrac/mittag_leffler.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "varfrac/gamma_utils.hpp"

#if defined(VARFRAC_HAVE_QUADMATH)
#include <quadmath.h>
using ml_real = __float128;
static ml_real ml_lgamma(ml_real x) { return lgammaq(x); }
static ml_real ml_exp(ml_real x) { return expq(x); }
static ml_real ml_log(ml_real x) { return logq(x); }
static ml_real ml_abs(ml_real x) { return fabsq(x); }
#else
using ml_real = long double;
static ml_real ml_lgamma(ml_real x) { return lgammal(x); }
static ml_real ml_exp(ml_real x) { return expl(x); }
static ml_real ml_log(ml_real x) { return logl(x); }
static ml_real ml_abs(ml_real x) { return fabsl(x); }
#endif

namespace varfrac {

int ml_k_star(double alpha0) {
    if (!(alpha0 > 0.0)) throw std::invalid_argument("ml_k_star: alpha0 must be positive");
    int k = static_cast<int>(std::ceil((GammaMinimum::eta - 1.0) / alpha0));
    return std::max(k, 0);
}

double ml_scalar(double alpha, double beta, double z, const MlSeriesControl& ctl) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("ml_scalar: alpha must lie in (0, 1]");
    if (!(beta > 0.0)) throw std::invalid_argument("ml_scalar: beta must be positive");
    int kstar = ml_k_star(alpha);
    if (ctl.max_terms < kstar)
        throw std::invalid_argument("ml_scalar: max_terms below k_star");
    // term_k = z^k / Gamma(alpha k + beta), accumulated in extended precision:
    // alternating arguments cancel large terms and double accumulation would
    // lose the result entirely (|z| = 20, alpha = 1 peaks near 4e7).
    ml_real acc = 0.0;
    ml_real zq = z;
    ml_real azq = ml_abs(zq);
    ml_real logaz = (z == 0.0) ? 0.0 : ml_log(azq);
    int below = 0;
    bool converged = false;
    for (int k = 0; k < ctl.max_terms; ++k) {
        ml_real term;
        if (k == 0) {
            term = ml_exp(-ml_lgamma(static_cast<ml_real>(beta)));
        } else if (z == 0.0) {
            converged = true;
            break;
        } else {
            ml_real mag = ml_exp(static_cast<ml_real>(k) * logaz -
                                 ml_lgamma(static_cast<ml_real>(alpha) * k +
                                           static_cast<ml_real>(beta)));
            term = (z < 0.0 && (k & 1)) ? -mag : mag;
        }
        acc += term;
        if (k >= kstar && ml_abs(term) <= static_cast<ml_real>(ctl.rel_tol) * ml_abs(acc)) {
            if (++below >= 3) {
                converged = true;
                break;
            }
        } else {
            below = 0;
        }
    }
    double value = static_cast<double>(acc);
    if (!converged)
        throw MlUnconvergedError("ml_scalar: series not converged within max_terms", value);
    return value;
}

Field ml_operator_apply(const OrderField& alpha, double t, const BoundedOperator& A,
                        const Field& u0, const MlSeriesControl& ctl, double p, double beta) {
    if (!(t >= 0.0)) throw std::invalid_argument("ml_operator_apply: t must be >= 0");
    if (u0.size() != alpha.values().size())
        throw std::invalid_argument("ml_operator_apply: alpha/field size mismatch");
    std::size_t n = u0.size();
    int kstar = ml_k_star(alpha.alpha0());
    if (ctl.max_terms < kstar)
        throw std::invalid_argument("ml_operator_apply: max_terms below k_star");
    std::vector<double> logt_a(n);
    bool tzero = (t == 0.0);
    for (std::size_t j = 0; j < n; ++j)
        logt_a[j] = tzero ? 0.0 : alpha.value(j) * std::log(t);

    Field acc(u0.grid, std::vector<double>(n, 0.0));
    std::vector<double> power = u0.values;  // A^k u0
    std::vector<double> term(n), next(n);
    double acc_norm = 0.0;
    int below = 0;
    bool converged = false;
    for (int k = 0; k < ctl.max_terms; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            double coef;
            if (k == 0) {
                coef = 1.0 / gamma_fn(beta);
            } else if (tzero) {
                coef = 0.0;
            } else {
                coef = std::exp(static_cast<double>(k) * logt_a[j] -
                                log_gamma(alpha.value(j) * k + beta));
            }
            term[j] = coef * power[j];
            if (!std::isfinite(term[j]))
                throw MlUnconvergedError("ml_operator_apply: overflow in series term",
                                         lp_norm(acc, p));
        }
        for (std::size_t j = 0; j < n; ++j) acc.values[j] += term[j];
        double tn = lp_norm(term, u0.grid->weights(), p);
        acc_norm = lp_norm(acc, p);
        if (tzero && k >= 1) {
            converged = true;
            break;
        }
        if (k >= kstar && tn <= ctl.rel_tol * std::max(acc_norm, 1e-300)) {
            if (++below >= 3) {
                converged = true;
                break;
            }
        } else {
            below = 0;
        }
        A.apply(power, next);
        power.swap(next);
    }
    if (!converged)
        throw MlUnconvergedError("ml_operator_apply: series not converged within max_terms",
                                 acc_norm);
    return acc;
}

namespace {

// sup_z E_{a0}(z) exp(-z^{1/a0}) over a log grid, floored at 1 and at the
// asymptotic level 1/a0; cached per a0.
double ml_envelope_constant(double a0) {
    static std::mutex mu;
    static std::map<double, double> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(a0);
        if (it != cache.end()) return it->second;
    }
    double zmax = std::min(25.0, std::pow(300.0 * a0, a0));
    double best = std::max(1.0, 1.0 / a0);
    MlSeriesControl ctl;
    for (int i = 0; i <= 160; ++i) {
        double z = zmax * std::pow(10.0, -4.0 * (1.0 - i / 160.0));
        double ratio;
        try {
            ratio = ml_scalar(a0, 1.0, z, ctl) * std::exp(-std::pow(z, 1.0 / a0));
        } catch (const MlUnconvergedError&) {
            continue;
        }
        best = std::max(best, ratio);
    }
    std::lock_guard<std::mutex> lock(mu);
    cache[a0] = best;
    return best;
}

}  // namespace

double growth_envelope(const OrderField& alpha, double a_norm, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("growth_envelope: t must be >= 0");
    if (!(a_norm >= 0.0)) throw std::invalid_argument("growth_envelope: norm must be >= 0");
    double a0 = alpha.alpha0();
    double su = alpha.sup();
    int kstar = ml_k_star(a0);
    // prefix: z^n <= (n a0 / e)^{n a0} exp(z^{1/a0}) uniformly in z >= 0
    double prefix = 0.0;
    for (int n = 0; n <= kstar; ++n) {
        double v = (n == 0) ? 1.0 : std::pow(n * a0 / std::exp(1.0), n * a0);
        prefix += v;
    }
    prefix /= GammaMinimum::gamma_at_eta;
    double mtilde = ml_envelope_constant(a0);
    // tighten the tail constant with the ratio at this call's regime argument
    double zcall = (t <= 1.0) ? std::pow(t, a0) * a_norm : std::pow(t, su) * a_norm;
    if (zcall > 0.0) {
        try {
            double ratio = ml_scalar(a0, 1.0, zcall) * std::exp(-std::pow(zcall, 1.0 / a0));
            mtilde = std::max(mtilde, ratio);
        } catch (const MlUnconvergedError&) {
            // out of the series guard range; keep the grid constant
        }
    }
    double M = prefix + mtilde;
    double exponent = (t <= 1.0)
                          ? std::pow(a_norm, 1.0 / a0) * t
                          : std::pow(a_norm, 1.0 / a0) * std::pow(t, su / a0);
    if (exponent > 700.0) return std::numeric_limits<double>::infinity();
    return M * std::exp(exponent);
}

}  // namespace varfrac
