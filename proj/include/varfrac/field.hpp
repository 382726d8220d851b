#pragma once

#include <span>
#include <vector>

#include "varfrac/grid.hpp"

namespace varfrac {

// A spatially discretized function (one time slice).
struct Field {
    SpatialGridPtr grid;
    std::vector<double> values;

    Field() = default;
    Field(SpatialGridPtr g, std::vector<double> v);
    static Field constant(SpatialGridPtr g, double value);

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t j) const { return values[j]; }
    double& operator[](std::size_t j) { return values[j]; }
};

// Weighted discrete L^p norm; p in [1, inf]. Throws on p < 1.
double lp_norm(const Field& u, double p);
double lp_norm(std::span<const double> values, std::span<const double> weights, double p);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

// A time-indexed sequence of fields on a shared grid. Slice 0 of solver
// outputs equals the supplied initial datum bitwise.
class Trajectory {
public:
    Trajectory(SpatialGridPtr grid, TimeGrid time);
    Trajectory(SpatialGridPtr grid, TimeGrid time, double fill);

    const TimeGrid& time() const { return time_; }
    SpatialGridPtr grid() const { return grid_; }
    std::size_t num_slices() const { return time_.nodes(); }
    std::size_t num_points() const { return nx_; }

    std::span<double> slice(std::size_t n) { return {data_.data() + n * nx_, nx_}; }
    std::span<const double> slice(std::size_t n) const { return {data_.data() + n * nx_, nx_}; }
    double at(std::size_t n, std::size_t j) const { return data_[n * nx_ + j]; }
    double& at(std::size_t n, std::size_t j) { return data_[n * nx_ + j]; }

    void set_slice(std::size_t n, std::span<const double> vals);
    Field field_at(std::size_t n) const;

    // sup over time of the spatial L^p norm
    double sup_lp_norm(double p) const;

private:
    SpatialGridPtr grid_;
    TimeGrid time_;
    std::size_t nx_;
    std::vector<double> data_;
};

// sup_n || a_n - b_n ||_p for two trajectories on matching grids
double sup_lp_distance(const Trajectory& a, const Trajectory& b, double p);

// Samples a scalar function f(t, x) onto a trajectory.
template <typename F>
Trajectory sample_trajectory(SpatialGridPtr grid, const TimeGrid& tg, F&& f) {
    Trajectory out(grid, tg);
    for (std::size_t n = 0; n < tg.nodes(); ++n) {
        double t = tg.node(n);
        auto s = out.slice(n);
        for (std::size_t j = 0; j < grid->size(); ++j) s[j] = f(t, grid->points()[j]);
    }
    return out;
}

}  // namespace varfrac
