#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

namespace varfrac {

// One-dimensional spatial grid: quadrature nodes x_j with positive weights w_j
// for integrals over Omega = (left, right).
class SpatialGrid {
public:
    SpatialGrid(std::vector<double> points, std::vector<double> weights,
                double left, double right);

    // n midpoint cells of equal width; sum of weights equals right-left exactly.
    static std::shared_ptr<const SpatialGrid> uniform_cells(double left, double right,
                                                            std::size_t n);

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    double left() const { return left_; }
    double right() const { return right_; }
    double measure() const { return right_ - left_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<double> points_;
    std::vector<double> weights_;
    double left_;
    double right_;
};

using SpatialGridPtr = std::shared_ptr<const SpatialGrid>;

// Uniform time grid t_k = k*dt, k = 0..steps, on [0, horizon]. The stored
// representation is (dt, steps), so consecutive spacing is dt by construction.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps);
    static TimeGrid from_step(double dt, std::size_t steps);

    double dt() const { return dt_; }
    double horizon() const { return horizon_; }
    std::size_t steps() const { return steps_; }
    std::size_t nodes() const { return steps_ + 1; }
    double node(std::size_t k) const { return dt_ * static_cast<double>(k); }

private:
    double horizon_;
    double dt_;
    std::size_t steps_;
};

struct OrderRegion {
    double lo;      // region covers (lo, hi]
    double hi;
    double value;
};

// The exponent function alpha(x) on a spatial grid, with certified bounds
// 0 < alpha0 <= alpha(x) <= sup <= 1.
class OrderField {
public:
    static OrderField constant(SpatialGridPtr grid, double value);
    static OrderField linear(SpatialGridPtr grid, double at_left, double at_right);
    static OrderField from_values(SpatialGridPtr grid, std::vector<double> values);
    static OrderField piecewise(SpatialGridPtr grid, std::vector<OrderRegion> regions);

    const std::vector<double>& values() const { return values_; }
    double value(std::size_t j) const { return values_[j]; }
    double alpha0() const { return alpha0_; }
    double sup() const { return sup_; }
    bool is_constant() const { return alpha0_ == sup_; }
    const std::optional<std::vector<OrderRegion>>& regions() const { return regions_; }
    SpatialGridPtr grid() const { return grid_; }

private:
    OrderField(SpatialGridPtr grid, std::vector<double> values,
               std::optional<std::vector<OrderRegion>> regions);

    SpatialGridPtr grid_;
    std::vector<double> values_;
    double alpha0_;
    double sup_;
    std::optional<std::vector<OrderRegion>> regions_;
};

}  // namespace varfrac
