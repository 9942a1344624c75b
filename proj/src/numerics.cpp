#include "relaxlab/numerics.hpp"

#include <algorithm>
#include <stdexcept>

namespace relaxlab {

std::vector<double> log_grid(double r_min, double r_max, std::size_t nodes) {
    if (!(r_min > 0.0) || !(r_max > r_min)) {
        throw std::invalid_argument("log_grid: need 0 < r_min < r_max");
    }
    if (nodes < 2) {
        throw std::invalid_argument("log_grid: need at least 2 nodes");
    }
    std::vector<double> r(nodes);
    const double lo = std::log(r_min);
    const double span = std::log(r_max) - lo;
    const double cells = static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
        r[i] = std::exp(lo + span * (static_cast<double>(i) / cells));
    }
    // pin the ends exactly so breakpoints survive round-off
    r.front() = r_min;
    r.back() = r_max;
    return r;
}

std::vector<double> log_grid_with_breaks(std::span<const double> breaks, std::size_t nodes,
                                         std::size_t min_cells) {
    if (breaks.size() < 2 || !strictly_increasing(breaks) || !(breaks.front() > 0.0)) {
        throw std::invalid_argument("log_grid_with_breaks: need positive increasing breakpoints");
    }
    const std::size_t pieces = breaks.size() - 1;
    const double total = std::log(breaks.back() / breaks.front());
    const std::size_t cells_total = std::max<std::size_t>(nodes > 1 ? nodes - 1 : 1, pieces * min_cells);

    std::vector<double> r{breaks.front()};
    for (std::size_t p = 0; p < pieces; ++p) {
        const double frac = std::log(breaks[p + 1] / breaks[p]) / total;
        const auto cells = std::max<std::size_t>(
            min_cells, static_cast<std::size_t>(std::lround(frac * static_cast<double>(cells_total))));
        auto piece = log_grid(breaks[p], breaks[p + 1], cells + 1);
        r.insert(r.end(), piece.begin() + 1, piece.end());
    }
    return r;
}

std::vector<double> uniform_grid(double a, double b, std::size_t nodes) {
    if (!(b > a) || nodes < 2) {
        throw std::invalid_argument("uniform_grid: need a < b and at least 2 nodes");
    }
    std::vector<double> x(nodes);
    const double cells = static_cast<double>(nodes - 1);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double t = static_cast<double>(i) / cells;
        x[i] = a + (b - a) * t;
    }
    x.back() = b;
    return x;
}

bool strictly_increasing(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t panels) {
    if (panels == 0 || panels % 2 != 0) {
        throw std::invalid_argument("simpson: panel count must be positive and even");
    }
    const double h = (b - a) / static_cast<double>(panels);
    CompensatedSum acc;
    acc.add(f(a));
    acc.add(f(b));
    for (std::size_t i = 1; i < panels; ++i) {
        const double w = (i % 2 == 1) ? 4.0 : 2.0;
        acc.add(w * f(a + h * static_cast<double>(i)));
    }
    return acc.value() * h / 3.0;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need two or more paired samples");
    }
    const auto m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument("loglog_slope: samples must be positive");
        }
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace relaxlab
