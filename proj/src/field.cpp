#include "varfrac/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace varfrac {

Field::Field(SpatialGridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (!grid) throw std::invalid_argument("Field: null grid");
    if (values.size() != grid->size())
        throw std::invalid_argument("Field: values/grid size mismatch");
}

Field Field::constant(SpatialGridPtr g, double value) {
    std::vector<double> v(g->size(), value);
    return Field(std::move(g), std::move(v));
}

double lp_norm(std::span<const double> values, std::span<const double> weights, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j) s += weights[j] * std::abs(values[j]);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j) s += weights[j] * values[j] * values[j];
        return std::sqrt(s);
    }
    double s = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j)
        s += weights[j] * std::pow(std::abs(values[j]), p);
    return std::pow(s, 1.0 / p);
}

double lp_norm(const Field& u, double p) {
    return lp_norm(u.values, u.grid->weights(), p);
}

Field operator+(const Field& a, const Field& b) {
    Field out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += b.values[j];
    return out;
}

Field operator-(const Field& a, const Field& b) {
    Field out = a;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= b.values[j];
    return out;
}

Field operator*(double s, const Field& a) {
    Field out = a;
    for (double& v : out.values) v *= s;
    return out;
}

Trajectory::Trajectory(SpatialGridPtr grid, TimeGrid time)
    : grid_(std::move(grid)), time_(time), nx_(grid_->size()),
      data_(time_.nodes() * nx_, 0.0) {}

Trajectory::Trajectory(SpatialGridPtr grid, TimeGrid time, double fill)
    : grid_(std::move(grid)), time_(time), nx_(grid_->size()),
      data_(time_.nodes() * nx_, fill) {}

void Trajectory::set_slice(std::size_t n, std::span<const double> vals) {
    if (vals.size() != nx_) throw std::invalid_argument("Trajectory: slice size mismatch");
    std::copy(vals.begin(), vals.end(), data_.begin() + static_cast<std::ptrdiff_t>(n * nx_));
}

Field Trajectory::field_at(std::size_t n) const {
    auto s = slice(n);
    return Field(grid_, std::vector<double>(s.begin(), s.end()));
}

double Trajectory::sup_lp_norm(double p) const {
    double m = 0.0;
    for (std::size_t n = 0; n < num_slices(); ++n)
        m = std::max(m, lp_norm(slice(n), grid_->weights(), p));
    return m;
}

double sup_lp_distance(const Trajectory& a, const Trajectory& b, double p) {
    if (a.num_slices() != b.num_slices() || a.num_points() != b.num_points())
        throw std::invalid_argument("sup_lp_distance: trajectory shape mismatch");
    std::vector<double> diff(a.num_points());
    double m = 0.0;
    for (std::size_t n = 0; n < a.num_slices(); ++n) {
        auto sa = a.slice(n);
        auto sb = b.slice(n);
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = sa[j] - sb[j];
        m = std::max(m, lp_norm(diff, a.grid()->weights(), p));
    }
    return m;
}

}  // namespace varfrac
