#include "varfrac/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace varfrac {

SpatialGrid::SpatialGrid(std::vector<double> points, std::vector<double> weights,
                         double left, double right)
    : points_(std::move(points)), weights_(std::move(weights)), left_(left), right_(right) {
    if (points_.empty()) throw std::invalid_argument("SpatialGrid: empty grid");
    if (points_.size() != weights_.size())
        throw std::invalid_argument("SpatialGrid: points/weights size mismatch");
    if (!(left_ < right_)) throw std::invalid_argument("SpatialGrid: empty domain");
    for (std::size_t j = 0; j < points_.size(); ++j) {
        if (!(weights_[j] > 0.0)) throw std::invalid_argument("SpatialGrid: weights must be positive");
        if (j > 0 && !(points_[j] > points_[j - 1]))
            throw std::invalid_argument("SpatialGrid: points must be strictly increasing");
    }
}

std::shared_ptr<const SpatialGrid> SpatialGrid::uniform_cells(double left, double right,
                                                              std::size_t n) {
    if (n == 0) throw std::invalid_argument("SpatialGrid: need at least one cell");
    double h = (right - left) / static_cast<double>(n);
    std::vector<double> pts(n), w(n, h);
    for (std::size_t j = 0; j < n; ++j)
        pts[j] = left + h * (static_cast<double>(j) + 0.5);
    // make the weight sum match the measure exactly
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) sum += w[j];
    w[n - 1] = (right - left) - sum;
    return std::make_shared<const SpatialGrid>(std::move(pts), std::move(w), left, right);
}

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("TimeGrid: horizon must be positive");
    if (steps == 0) throw std::invalid_argument("TimeGrid: need at least one step");
    dt_ = horizon / static_cast<double>(steps);
}

TimeGrid TimeGrid::from_step(double dt, std::size_t steps) {
    if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: step must be positive");
    TimeGrid tg(dt * static_cast<double>(steps), steps);
    tg.dt_ = dt;
    return tg;
}

OrderField::OrderField(SpatialGridPtr grid, std::vector<double> values,
                       std::optional<std::vector<OrderRegion>> regions)
    : grid_(std::move(grid)), values_(std::move(values)), regions_(std::move(regions)) {
    if (!grid_) throw std::invalid_argument("OrderField: null grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("OrderField: values/grid size mismatch");
    alpha0_ = 1.0;
    sup_ = 0.0;
    for (double a : values_) {
        if (!(a > 0.0) || !(a <= 1.0))
            throw std::invalid_argument("OrderField: orders must lie in (0, 1]");
        alpha0_ = std::min(alpha0_, a);
        sup_ = std::max(sup_, a);
    }
    if (regions_) {
        const auto& regs = *regions_;
        if (regs.empty()) throw std::invalid_argument("OrderField: empty region list");
        double cursor = grid_->left();
        for (const auto& r : regs) {
            if (std::abs(r.lo - cursor) > 1e-12)
                throw std::invalid_argument("OrderField: regions must tile the domain");
            if (!(r.hi > r.lo)) throw std::invalid_argument("OrderField: empty region");
            cursor = r.hi;
        }
        if (std::abs(cursor - grid_->right()) > 1e-12)
            throw std::invalid_argument("OrderField: regions must tile the domain");
        for (std::size_t j = 0; j < values_.size(); ++j) {
            double x = grid_->points()[j];
            for (const auto& r : regs) {
                if (x > r.lo && x <= r.hi) {
                    if (values_[j] != r.value)
                        throw std::invalid_argument("OrderField: regions must reproduce values");
                    break;
                }
            }
        }
    }
}

OrderField OrderField::constant(SpatialGridPtr grid, double value) {
    std::vector<double> v(grid->size(), value);
    std::vector<OrderRegion> regs{{grid->left(), grid->right(), value}};
    return OrderField(std::move(grid), std::move(v), std::move(regs));
}

OrderField OrderField::linear(SpatialGridPtr grid, double at_left, double at_right) {
    std::vector<double> v(grid->size());
    double a = grid->left(), b = grid->right();
    for (std::size_t j = 0; j < v.size(); ++j) {
        double s = (grid->points()[j] - a) / (b - a);
        v[j] = at_left + s * (at_right - at_left);
    }
    return OrderField(std::move(grid), std::move(v), std::nullopt);
}

OrderField OrderField::from_values(SpatialGridPtr grid, std::vector<double> values) {
    return OrderField(std::move(grid), std::move(values), std::nullopt);
}

OrderField OrderField::piecewise(SpatialGridPtr grid, std::vector<OrderRegion> regions) {
    std::vector<double> v(grid->size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        double x = grid->points()[j];
        bool found = false;
        for (const auto& r : regions) {
            if ((x > r.lo && x <= r.hi) || (!found && j == 0 && x >= r.lo && x <= r.hi)) {
                v[j] = r.value;
                found = true;
                break;
            }
        }
        if (!found) throw std::invalid_argument("OrderField: grid point outside regions");
    }
    return OrderField(std::move(grid), std::move(v), std::move(regions));
}

}  // namespace varfrac
