#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "varfrac/field.hpp"

namespace varfrac {

// Bounded linear map on fields with a certified operator-norm estimate.
//
// Kinds:
//   Multiplication    (A phi)(x_j) = psi_j phi_j
//   VolterraCumulative (A phi)(x_j) = sum_{x_i < x_j} w_i phi_i, the running
//                      quadrature of int_left^x phi; value at the first grid
//                      point is 0.
//   DenseMatrix       matrix-vector product in the grid basis
class BoundedOperator {
public:
    enum class Kind { Multiplication, VolterraCumulative, DenseMatrix };

    static BoundedOperator multiplication(Field psi);
    static BoundedOperator volterra(SpatialGridPtr grid);
    // row-major n x n matrix
    static BoundedOperator dense(SpatialGridPtr grid, std::vector<double> matrix);
    static BoundedOperator zero(SpatialGridPtr grid);

    Kind kind() const { return kind_; }
    SpatialGridPtr grid() const { return grid_; }

    void apply(std::span<const double> in, std::span<double> out) const;
    Field apply(const Field& u) const;

    // Upper bound (Multiplication: exact; Volterra: |Omega|; Dense: power
    // iteration on the weighted normal matrix for p = 2, row/column sums for
    // p = inf / 1).
    double norm_estimate(double p) const;
    bool norm_is_exact() const { return kind_ == Kind::Multiplication; }

    // true when the operator is diagonal in the grid basis
    bool is_diagonal() const;

private:
    BoundedOperator(Kind k, SpatialGridPtr grid);

    Kind kind_;
    SpatialGridPtr grid_;
    std::vector<double> psi_;     // Multiplication
    std::vector<double> matrix_;  // DenseMatrix
};

}  // namespace varfrac
