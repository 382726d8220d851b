#include "varfrac/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace varfrac {

BoundedOperator::BoundedOperator(Kind k, SpatialGridPtr grid)
    : kind_(k), grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("BoundedOperator: null grid");
}

BoundedOperator BoundedOperator::multiplication(Field psi) {
    BoundedOperator op(Kind::Multiplication, psi.grid);
    op.psi_ = std::move(psi.values);
    return op;
}

BoundedOperator BoundedOperator::volterra(SpatialGridPtr grid) {
    return BoundedOperator(Kind::VolterraCumulative, std::move(grid));
}

BoundedOperator BoundedOperator::dense(SpatialGridPtr grid, std::vector<double> matrix) {
    std::size_t n = grid->size();
    if (matrix.size() != n * n)
        throw std::invalid_argument("BoundedOperator: dense matrix must be n x n");
    BoundedOperator op(Kind::DenseMatrix, std::move(grid));
    op.matrix_ = std::move(matrix);
    return op;
}

BoundedOperator BoundedOperator::zero(SpatialGridPtr grid) {
    return multiplication(Field::constant(std::move(grid), 0.0));
}

void BoundedOperator::apply(std::span<const double> in, std::span<double> out) const {
    std::size_t n = grid_->size();
    if (in.size() != n || out.size() != n)
        throw std::invalid_argument("BoundedOperator: field/grid size mismatch");
    switch (kind_) {
        case Kind::Multiplication:
            for (std::size_t j = 0; j < n; ++j) out[j] = psi_[j] * in[j];
            break;
        case Kind::VolterraCumulative: {
            // running sum over nodes strictly to the left; 0 at the first point
            const auto& w = grid_->weights();
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                out[j] = acc;
                acc += w[j] * in[j];
            }
            break;
        }
        case Kind::DenseMatrix:
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                const double* row = matrix_.data() + i * n;
                for (std::size_t j = 0; j < n; ++j) s += row[j] * in[j];
                out[i] = s;
            }
            break;
    }
}

Field BoundedOperator::apply(const Field& u) const {
    Field out = u;
    apply(u.values, out.values);
    return out;
}

bool BoundedOperator::is_diagonal() const {
    if (kind_ == Kind::Multiplication) return true;
    if (kind_ != Kind::DenseMatrix) return false;
    std::size_t n = grid_->size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && matrix_[i * n + j] != 0.0) return false;
    return true;
}

double BoundedOperator::norm_estimate(double p) const {
    if (!(p >= 1.0)) throw std::invalid_argument("norm_estimate: p must be >= 1");
    std::size_t n = grid_->size();
    switch (kind_) {
        case Kind::Multiplication: {
            double m = 0.0;
            for (double v : psi_) m = std::max(m, std::abs(v));
            return m;
        }
        case Kind::VolterraCumulative:
            // |(A phi)(x)| <= |Omega|^{1/p'} ||phi||_p, then the outer L^p norm
            // contributes |Omega|^{1/p}
            return grid_->measure();
        case Kind::DenseMatrix: {
            const auto& w = grid_->weights();
            if (std::isinf(p)) {
                double m = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < n; ++j) s += std::abs(matrix_[i * n + j]);
                    m = std::max(m, s);
                }
                return m;
            }
            if (p == 1.0) {
                double m = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i) s += w[i] * std::abs(matrix_[i * n + j]);
                    m = std::max(m, s / w[j]);
                }
                return m;
            }
            // p = 2 (and general finite p falls back to the weighted 2-norm
            // estimate): power iteration on B^T B with B = W^{1/2} M W^{-1/2},
            // 50 iterations, declared as an estimate.
            std::vector<double> v(n), bv(n), btbv(n);
            for (std::size_t j = 0; j < n; ++j) v[j] = 1.0 / std::sqrt(static_cast<double>(n));
            double sigma = 0.0;
            for (int it = 0; it < 50; ++it) {
                // bv = B v
                for (std::size_t i = 0; i < n; ++i) {
                    double s = 0.0;
                    for (std::size_t j = 0; j < n; ++j)
                        s += matrix_[i * n + j] * v[j] / std::sqrt(w[j]);
                    bv[i] = std::sqrt(w[i]) * s;
                }
                // btbv = B^T bv
                for (std::size_t j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < n; ++i)
                        s += std::sqrt(w[i]) * matrix_[i * n + j] * bv[i];
                    btbv[j] = s / std::sqrt(w[j]);
                }
                double nrm = 0.0;
                for (double x : btbv) nrm += x * x;
                nrm = std::sqrt(nrm);
                if (nrm == 0.0) return 0.0;
                for (std::size_t j = 0; j < n; ++j) v[j] = btbv[j] / nrm;
                sigma = std::sqrt(nrm);
            }
            return sigma;
        }
    }
    return 0.0;
}

}  // namespace varfrac
