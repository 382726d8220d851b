#include "varfrac/kernel_weights.hpp"

#include <cmath>
#include <stdexcept>

#include "varfrac/gamma_utils.hpp"
#include "varfrac/parallel.hpp"

namespace varfrac {

namespace {

// Exact subinterval moments on a uniform grid (lag l = n - k, interval
// [t_k, t_{k+1}], kernel (t_n - s)^{beta-1}):
//   rect(l) = int (t_n - s)^{beta-1} ds / Gamma(beta)
//   left(l) = int (t_{k+1} - s)(t_n - s)^{beta-1} ds / (dt Gamma(beta))
//   right(l) = int (s - t_k)(t_n - s)^{beta-1} ds / (dt Gamma(beta))
struct LagTables {
    std::vector<double> rect;   // Rectangle: coefficient of the left node
    std::vector<double> left;   // L1: coefficient of node k from interval k
    std::vector<double> right;  // L1: coefficient of node k+1 from interval k
};

LagTables build_lag(double beta, std::size_t nlag, double dt, Scheme scheme) {
    LagTables t;
    if (beta == 1.0) {
        // classical integral: rectangle rule / trapezoid rule
        if (scheme == Scheme::Rectangle) {
            t.rect.assign(nlag, dt);
        } else {
            t.left.assign(nlag, dt / 2.0);
            t.right.assign(nlag, dt / 2.0);
        }
        return t;
    }
    double g1 = gamma_fn(beta + 1.0);               // beta * Gamma(beta)
    double g2 = gamma_fn(beta + 2.0);               // (beta+1) * beta * Gamma(beta)
    double dpow = std::pow(dt, beta);
    std::vector<double> lb(nlag + 1), lb1(nlag + 1);
    for (std::size_t l = 0; l <= nlag; ++l) {
        lb[l] = std::pow(static_cast<double>(l), beta);
        lb1[l] = std::pow(static_cast<double>(l), beta + 1.0);
    }
    if (scheme == Scheme::Rectangle) {
        t.rect.resize(nlag);
        for (std::size_t l = 1; l <= nlag; ++l)
            t.rect[l - 1] = dpow * (lb[l] - lb[l - 1]) / g1;
        return t;
    }
    t.left.resize(nlag);
    t.right.resize(nlag);
    for (std::size_t l = 1; l <= nlag; ++l) {
        double dl = lb[l] - lb[l - 1];
        double dl1 = lb1[l] - lb1[l - 1];
        t.left[l - 1] = dpow * (beta * dl1 / g2 - static_cast<double>(l - 1) * dl / g1);
        t.right[l - 1] = dpow * (static_cast<double>(l) * dl / g1 - beta * dl1 / g2);
    }
    return t;
}

}  // namespace

KernelWeights::KernelWeights(const TimeGrid& tg, const OrderField& alpha, Scheme scheme)
    : tg_(tg), scheme_(scheme), np_(alpha.values().size()), nlag_(tg.steps()),
      alpha_(alpha.values()) {
    if (scheme_ == Scheme::Rectangle) {
        a_.resize(np_ * nlag_);
    } else {
        a_.resize(np_ * nlag_);
        b_.resize(np_ * nlag_);
    }
    parallel_for(np_, [&](std::size_t j) {
        LagTables t = build_lag(alpha_[j], nlag_, tg_.dt(), scheme_);
        if (scheme_ == Scheme::Rectangle) {
            for (std::size_t l = 0; l < nlag_; ++l) a_[j * nlag_ + l] = t.rect[l];
        } else {
            for (std::size_t l = 0; l < nlag_; ++l) {
                a_[j * nlag_ + l] = t.left[l];
                b_[j * nlag_ + l] = t.right[l];
            }
        }
    });
}

double KernelWeights::weight(std::size_t n, std::size_t m, std::size_t j) const {
    if (m > n || n > nlag_) return 0.0;
    const double* aj = a_.data() + j * nlag_;
    if (scheme_ == Scheme::Rectangle) {
        // interval k = m contributes to node m only, lag n - m >= 1
        return (m < n) ? aj[n - m - 1] : 0.0;
    }
    const double* bj = b_.data() + j * nlag_;
    double w = 0.0;
    if (m < n) w += aj[n - m - 1];        // interval m, left endpoint
    if (m >= 1) w += bj[n - m];           // interval m-1, right endpoint
    return w;
}

double KernelWeights::row_sum(std::size_t n, std::size_t j) const {
    double s = 0.0;
    for (std::size_t m = 0; m <= n; ++m) s += weight(n, m, j);
    return s;
}

void KernelWeights::apply(const Trajectory& phi, Trajectory& out) const {
    if (phi.num_points() != np_ || out.num_points() != np_ ||
        phi.num_slices() != tg_.nodes() || out.num_slices() != tg_.nodes())
        throw std::invalid_argument("KernelWeights: trajectory shape mismatch");
    std::size_t N = tg_.steps();
    parallel_for(np_, [&](std::size_t j) {
        const double* aj = a_.data() + j * nlag_;
        const double* bj = b_.empty() ? nullptr : b_.data() + j * nlag_;
        for (std::size_t n = 0; n <= N; ++n) {
            long double acc = 0.0L;
            if (scheme_ == Scheme::Rectangle) {
                for (std::size_t m = 0; m < n; ++m)
                    acc += static_cast<long double>(aj[n - m - 1]) * phi.at(m, j);
            } else {
                for (std::size_t m = 0; m < n; ++m) {
                    acc += static_cast<long double>(aj[n - m - 1]) * phi.at(m, j);
                    acc += static_cast<long double>(bj[n - m - 1]) * phi.at(m + 1, j);
                }
            }
            out.at(n, j) = static_cast<double>(acc);
        }
    });
}

double KernelWeights::partial(const Trajectory& phi, std::size_t n, std::size_t j,
                              std::size_t m0, std::size_t m1) const {
    const double* aj = a_.data() + j * nlag_;
    const double* bj = b_.empty() ? nullptr : b_.data() + j * nlag_;
    long double acc = 0.0L;
    if (scheme_ == Scheme::Rectangle) {
        for (std::size_t m = m0; m < m1 && m < n; ++m)
            acc += static_cast<long double>(aj[n - m - 1]) * phi.at(m, j);
    } else {
        for (std::size_t m = m0; m < m1 && m <= n; ++m) {
            double w = 0.0;
            if (m < n) w += aj[n - m - 1];
            if (m >= 1) w += bj[n - m];
            acc += static_cast<long double>(w) * phi.at(m, j);
        }
    }
    return static_cast<double>(acc);
}

LagPair l1_uniform_lag(double beta, std::size_t nlag, double dt) {
    if (!(beta > 0.0)) throw std::invalid_argument("l1_uniform_lag: beta must be positive");
    LagTables t = build_lag(beta, nlag, dt, Scheme::L1Linear);
    return {std::move(t.left), std::move(t.right)};
}

std::vector<double> l1_row_weights(std::span<const double> nodes, std::size_t row,
                                   double beta) {
    if (row >= nodes.size()) throw std::invalid_argument("l1_row_weights: row out of range");
    std::vector<double> w(row + 1, 0.0);
    if (row == 0) return w;
    double tn = nodes[row];
    if (beta == 1.0) {
        for (std::size_t k = 0; k + 1 <= row; ++k) {
            double h = nodes[k + 1] - nodes[k];
            w[k] += h / 2.0;
            w[k + 1] += h / 2.0;
        }
        return w;
    }
    double g1 = gamma_fn(beta + 1.0);
    double g2 = gamma_fn(beta + 2.0);
    for (std::size_t k = 0; k + 1 <= row; ++k) {
        double tk = nodes[k], tk1 = nodes[k + 1];
        double h = tk1 - tk;
        double wk = tn - tk, wk1 = tn - tk1;
        double pk = std::pow(wk, beta), pk1 = std::pow(wk1, beta);
        double qk = std::pow(wk, beta + 1.0), qk1 = std::pow(wk1, beta + 1.0);
        double d = pk - pk1;
        double d1 = qk - qk1;
        // int (tk1 - s) kern = d1/((beta+1)beta Gamma) - wk1 d /(beta Gamma) ... expressed
        // through Gamma(beta+1), Gamma(beta+2)
        double left = beta * d1 / g2 - wk1 * d / g1;
        double right = wk * d / g1 - beta * d1 / g2;
        w[k] += left / h;
        w[k + 1] += right / h;
    }
    return w;
}

double weak_singular_moment(double beta, double gam, double tn, double a, double b) {
    if (!(beta > 0.0) || !(gam >= 0.0) || !(tn > 0.0) || a < 0.0 || b > tn || !(a < b))
        throw std::invalid_argument("weak_singular_moment: bad arguments");
    // F(x) = int_0^x (tn - s)^{beta-1} s^gam ds, series valid for x <= tn/2
    auto F = [&](double x) -> double {
        if (x <= 0.0) return 0.0;
        double s = 0.0, c = 1.0;
        double xp = std::pow(x, gam + 1.0);
        double r = x / tn;
        for (int m = 0; m < 200; ++m) {
            double term = c * xp / (gam + m + 1.0);
            s += term;
            if (m > 3 && term < 1e-17 * s) break;
            c *= (m + 1.0 - beta) / (m + 1.0);
            xp *= r;
        }
        return std::pow(tn, beta - 1.0) * s;
    };
    // G(y) = int_0^y w^{beta-1} (tn - w)^gam dw, series valid for y <= tn/2
    auto G = [&](double y) -> double {
        if (y <= 0.0) return 0.0;
        double s = 0.0, c = 1.0;
        double yp = std::pow(y, beta);
        double r = y / tn;
        for (int m = 0; m < 200; ++m) {
            double term = c * yp / (beta + m);
            s += term;
            if (m > 3 && std::abs(term) < 1e-17 * std::abs(s)) break;
            c *= (m - gam) / (m + 1.0);
            yp *= r;
        }
        return std::pow(tn, gam) * s;
    };
    double h = 0.5 * tn;
    double out = 0.0;
    if (a < h) out += F(std::min(b, h)) - F(a);
    if (b > h) out += G(tn - std::max(a, h)) - G(tn - b);
    return out;
}

void apply_singular_basis(std::span<const double> vals, double beta, double gam,
                          double dt, std::span<double> out) {
    std::size_t N = vals.size() - 1;
    if (out.size() != vals.size())
        throw std::invalid_argument("apply_singular_basis: size mismatch");
    if (!(beta > 0.0) || !(beta <= 1.0) || !(gam > 0.0))
        throw std::invalid_argument("apply_singular_basis: bad orders");
    double ginv = 1.0 / gamma_fn(beta);
    // power tables: pg[k] = t_k^gam, pg1[k] = t_k^{gam+1}, pb[l] = (l dt)^beta
    std::vector<double> pg(N + 1), pg1(N + 1), pb(N + 1);
    for (std::size_t k = 0; k <= N; ++k) {
        double t = dt * static_cast<double>(k);
        pg[k] = std::pow(t, gam);
        pg1[k] = pg[k] * t;
        pb[k] = std::pow(t, beta);
    }
    double half_g1 = std::pow(2.0, -(gam + 1.0));
    double half_b = std::pow(2.0, -beta);
    out[0] = 0.0;

    parallel_for(N, [&](std::size_t idx) {
        std::size_t n = idx + 1;
        double tn = dt * static_cast<double>(n);
        double fpre = pb[n] / tn;  // tn^{beta-1}
        double gpre = pg[n];       // tn^gam
        double inv_n = 1.0 / static_cast<double>(n);

        // F(x) = tn^{beta-1} sum_m c_m x^{gam+1} (x/tn)^m / (gam+m+1)
        auto F = [&](double ratio, double xg1) {
            if (xg1 == 0.0) return 0.0;
            double s = 0.0, c = 1.0, rp = 1.0;
            for (int m = 0; m < 200; ++m) {
                double term = c * rp / (gam + m + 1.0);
                s += term;
                if (m > 3 && term < 1e-17 * s) break;
                c *= (m + 1.0 - beta) / (m + 1.0);
                rp *= ratio;
            }
            return fpre * xg1 * s;
        };
        // G(y) = tn^gam sum_m d_m y^beta (y/tn)^m / (beta+m)
        auto G = [&](double ratio, double yb) {
            if (yb == 0.0) return 0.0;
            double s = 0.0, d = 1.0, rp = 1.0;
            for (int m = 0; m < 200; ++m) {
                double term = d * rp / (beta + m);
                s += term;
                if (m > 3 && std::abs(term) < 1e-17 * std::abs(s)) break;
                d *= (m - gam) / (m + 1.0);
                rp *= ratio;
            }
            return gpre * yb * s;
        };
        double f_half = F(0.5, pg1[n] * half_g1);
        double g_half = G(0.5, pb[n] * half_b);

        long double acc = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t l = n - k;  // lag of the left node
            double m0 = (pb[l] - pb[l - 1]) / beta;
            double mg = 0.0;
            if (2 * (k + 1) <= n) {
                // interval entirely in the F region
                mg = F((k + 1) * inv_n, pg1[k + 1]) - F(k * inv_n, pg1[k]);
            } else if (2 * k >= n) {
                // entirely in the G region (w = tn - s)
                mg = G((l)*inv_n, pb[l]) - G((l - 1) * inv_n, pb[l - 1]);
            } else {
                mg = (f_half - F(k * inv_n, pg1[k])) + (g_half - G((l - 1) * inv_n, pb[l - 1]));
            }
            double bcoef = (vals[k + 1] - vals[k]) / (pg[k + 1] - pg[k]);
            double acoef = vals[k] - bcoef * pg[k];
            acc += static_cast<long double>(acoef) * m0 + static_cast<long double>(bcoef) * mg;
        }
        out[n] = static_cast<double>(acc) * ginv;
    });
}

}  // namespace varfrac
