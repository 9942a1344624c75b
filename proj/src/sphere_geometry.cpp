#include "relaxlab/sphere_geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace relaxlab {

PlanePoint stereo_project(const SpherePoint& p) {
    if (p.z >= 0.0) return {p.x / (1.0 + p.z), p.y / (1.0 + p.z), false};
    // southern hemisphere: 1 + z = (x^2 + y^2) / (1 - z) avoids the cancellation
    const double rho2 = p.x * p.x + p.y * p.y;
    if (rho2 == 0.0) return PlanePoint::infinity();
    const double k = (1.0 - p.z) / rho2;
    return {p.x * k, p.y * k, false};
}

SpherePoint stereo_inverse(const PlanePoint& w) {
    if (w.at_infinity) return {0.0, 0.0, -1.0};
    const double m = std::hypot(w.x, w.y);
    if (m <= 1.0) {
        const double m2 = m * m;
        const double d = 1.0 + m2;
        return {2.0 * w.x / d, 2.0 * w.y / d, (1.0 - m2) / d};
    }
    // divide through by |w|^2 so huge inputs do not overflow
    const double g = 1.0 / m;
    const double g2 = g * g;
    const double d = g2 + 1.0;
    return {2.0 * (w.x * g) * g / d, 2.0 * (w.y * g) * g / d, (g2 - 1.0) / d};
}

ChartValue::ChartValue(double v) : value_(v) {
    if (std::isnan(v) || v < 0.0) {
        throw std::invalid_argument("ChartValue: value must be >= 0 or +inf");
    }
}

double ChartValue::cap_fraction() const {
    if (is_infinite()) return 1.0;
    if (value_ > 1.0) {
        const double g = 1.0 / value_;
        return 1.0 / (1.0 + g * g);
    }
    const double f2 = value_ * value_;
    return f2 / (1.0 + f2);
}

double chart_to_colatitude(ChartValue f) {
    return 2.0 * std::atan(f.value());
}

ChartValue colatitude_to_chart(double phi) {
    if (std::isnan(phi) || phi < 0.0 || phi > pi) {
        throw std::invalid_argument("colatitude_to_chart: phi must lie in [0, pi]");
    }
    if (phi == pi) return ChartValue::infinity();
    return ChartValue(std::tan(0.5 * phi));
}

RadialProfile::RadialProfile(std::vector<double> grid, std::vector<double> phi, int n)
    : grid_(std::move(grid)), phi_(std::move(phi)), n_(n) {
    if (n_ < 1) throw std::invalid_argument("RadialProfile: winding number must be >= 1");
    if (grid_.size() < 2) throw std::invalid_argument("RadialProfile: need at least 2 nodes");
    if (grid_.size() != phi_.size()) {
        throw std::invalid_argument("RadialProfile: grid and phi sizes differ");
    }
    if (!(grid_.front() > 0.0) || !strictly_increasing(grid_)) {
        throw std::invalid_argument("RadialProfile: grid must be positive and strictly increasing");
    }
    for (double v : phi_) {
        if (std::isnan(v) || v < 0.0 || v > pi) {
            throw std::invalid_argument("RadialProfile: phi values must lie in [0, pi]");
        }
    }
}

double RadialProfile::phi_at(double r) const {
    if (r < grid_.front() || r > grid_.back()) {
        throw std::out_of_range("RadialProfile::phi_at: radius outside grid");
    }
    auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
    if (it == grid_.end()) return phi_.back();
    const auto j = static_cast<std::size_t>(it - grid_.begin());
    const std::size_t i = j - 1;
    const double t = std::log(r / grid_[i]) / std::log(grid_[j] / grid_[i]);
    return phi_[i] + t * (phi_[j] - phi_[i]);
}

void write_profile_csv(std::ostream& os, const RadialProfile& p) {
    os << "r,phi\n";
    char buf[64];
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.grid()[i], p.phi()[i]);
        os << buf;
    }
}

RadialProfile read_profile_csv(std::istream& is, int n) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("r,phi", 0) != 0) {
        throw std::invalid_argument("read_profile_csv: expected header 'r,phi'");
    }
    std::vector<double> r, phi;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("read_profile_csv: malformed row '" + line + "'");
        }
        r.push_back(std::stod(line.substr(0, comma)));
        phi.push_back(std::stod(line.substr(comma + 1)));
    }
    return RadialProfile(std::move(r), std::move(phi), n);
}

double u0_chart(double alpha, int n, double r) {
    return alpha * std::pow(r, n);
}

double u_eps_chart(double alpha, int n, double eps, double r) {
    if (r >= eps) return alpha * std::pow(r, n);
    return alpha * std::pow(eps, 2 * n) * std::pow(r, -n);
}

RadialProfile profile_from_chart(const std::function<double(double)>& f, int n,
                                 std::span<const double> grid) {
    std::vector<double> phi(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        phi[i] = chart_to_colatitude(ChartValue(f(grid[i])));
    }
    return RadialProfile(std::vector<double>(grid.begin(), grid.end()), std::move(phi), n);
}

RadialProfile u0_profile(double alpha, int n, std::span<const double> grid) {
    if (alpha < 0.0) throw std::invalid_argument("u0_profile: alpha must be >= 0");
    if (n < 1) throw std::invalid_argument("u0_profile: n must be >= 1");
    return profile_from_chart([&](double r) { return u0_chart(alpha, n, r); }, n, grid);
}

RadialProfile u_eps_profile(double alpha, int n, double eps, std::span<const double> grid) {
    if (!(eps > 0.0) || eps > 1.0) {
        throw std::invalid_argument("u_eps_profile: eps must lie in (0, 1]");
    }
    if (alpha < 0.0) throw std::invalid_argument("u_eps_profile: alpha must be >= 0");
    if (n < 1) throw std::invalid_argument("u_eps_profile: n must be >= 1");
    return profile_from_chart([&](double r) { return u_eps_chart(alpha, n, eps, r); }, n, grid);
}

ConeDipoleMap::ConeDipoleMap(double alpha, int n) : alpha_(alpha), n_(n) {
    if (!(alpha > 0.0) || alpha > 0.25) {
        throw std::invalid_argument("ConeDipoleMap: alpha must lie in (0, 1/4]");
    }
    if (n < 1) throw std::invalid_argument("ConeDipoleMap: n must be >= 1");
}

double ConeDipoleMap::chart(double r, double z) const {
    const double zz = std::abs(z);  // C- is the mirror image of C+
    if (zz > 1.0 && r < zz - 1.0) {
        if (r == 0.0) return std::numeric_limits<double>::infinity();
        return alpha_ * std::pow(zz - 1.0, 2 * n_) * std::pow(r, -n_);
    }
    return alpha_ * std::pow(r, n_);
}

SpherePoint axial_map_point(double f, int n, double theta) {
    const double c = std::cos(n * theta);
    const double s = std::sin(n * theta);
    if (std::isinf(f)) return {0.0, 0.0, -1.0};
    return stereo_inverse({f * c, f * s, false});
}

SpherePoint tilde_u0_value(const ConeDipoleMap& map, double r, double theta, double z) {
    if (r < 0.0) throw std::invalid_argument("tilde_u0_value: r must be >= 0");
    if (r == 0.0 && std::abs(z) == 1.0) {
        throw std::domain_error("tilde_u0_value: (0,0,+-1) are the singular points");
    }
    if (r * r + z * z > 4.0 * (1.0 + 1e-12)) {
        throw std::domain_error("tilde_u0_value: point outside the closed ball of radius 2");
    }
    return axial_map_point(map.chart(r, z), map.n(), theta);
}

namespace {

SpherePoint eval_on_sphere(const AxialMap& u, const Point3& c, double radius, double polar,
                           double theta) {
    const double r = radius * std::sin(polar);
    const double z = c.z + radius * std::cos(polar);
    return u(std::max(r, 0.0), theta, z);
}

double triple(const SpherePoint& a, const SpherePoint& b, const SpherePoint& c) {
    return a.x * (b.y * c.z - b.z * c.y) + a.y * (b.z * c.x - b.x * c.z) +
           a.z * (b.x * c.y - b.y * c.x);
}

}  // namespace

DegreeResult degree_from_flux(const AxialMap& u, const Point3& center, double radius,
                              std::size_t panels) {
    if (center.x != 0.0 || center.y != 0.0) {
        throw std::invalid_argument("degree_from_flux: center must lie on the z-axis");
    }
    if (!(radius > 0.0)) throw std::invalid_argument("degree_from_flux: radius must be positive");

    constexpr double h = 1e-6;
    // u . (d_polar u x d_theta u) at theta = 0; the theta integral contributes 2 pi.
    auto density = [&](double polar) {
        if (polar <= 0.0 || polar >= pi) return 0.0;  // d_theta u vanishes on the axis
        const SpherePoint u0 = eval_on_sphere(u, center, radius, polar, 0.0);
        const SpherePoint up = eval_on_sphere(u, center, radius, polar + h, 0.0);
        const SpherePoint um = eval_on_sphere(u, center, radius, polar - h, 0.0);
        const SpherePoint tp = eval_on_sphere(u, center, radius, polar, h);
        const SpherePoint tm = eval_on_sphere(u, center, radius, polar, -h);
        const SpherePoint du{(up.x - um.x) / (2 * h), (up.y - um.y) / (2 * h),
                             (up.z - um.z) / (2 * h)};
        const SpherePoint dt{(tp.x - tm.x) / (2 * h), (tp.y - tm.y) / (2 * h),
                             (tp.z - tm.z) / (2 * h)};
        return triple(u0, du, dt);
    };

    DegreeResult out;
    out.flux = 0.5 * simpson(density, 0.0, pi, panels);
    out.degree = static_cast<int>(std::lround(out.flux));
    out.residual = std::abs(out.flux - out.degree);
    if (out.residual > 0.1) {
        throw std::runtime_error("degree_from_flux: flux residual " + std::to_string(out.residual) +
                                 " signals an under-resolved quadrature");
    }
    return out;
}

}  // namespace relaxlab
