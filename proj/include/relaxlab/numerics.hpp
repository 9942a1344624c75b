#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace relaxlab {

inline constexpr double pi = 3.14159265358979323846;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double distance(const Point3& p, const Point3& q) {
    return std::hypot(p.x - q.x, p.y - q.y, p.z - q.z);
}

// Neumaier compensated summation. Order of add() calls fixes the result bit for bit.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Geometric (log-spaced) nodes r_min = r_0 < ... < r_{nodes-1} = r_max.
std::vector<double> log_grid(double r_min, double r_max, std::size_t nodes);

/// Geometric nodes on each piece [breaks[i], breaks[i+1]], sharing the breakpoints.
/// Nodes are split between pieces in proportion to log-length, at least `min_cells` cells each.
std::vector<double> log_grid_with_breaks(std::span<const double> breaks, std::size_t nodes,
                                         std::size_t min_cells = 4);

/// Uniform nodes a = x_0 < ... < x_{nodes-1} = b.
std::vector<double> uniform_grid(double a, double b, std::size_t nodes);

/// True when the values are strictly increasing.
bool strictly_increasing(std::span<const double> v);

/// Composite Simpson rule with an even number of panels.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace relaxlab
