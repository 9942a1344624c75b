#pragma once

// Stereographic chart, colatitude profiles and the explicit n-axially symmetric
// map constructions (the straight-axis map u0, its smoothings u_eps and the
// cone-dipole map).
//
// An n-axially symmetric map is u(r, theta, z) = Pi^{-1}(f(r, z) (cos n theta, sin n theta)),
// where Pi is stereographic projection from the south pole. Profiles are stored as
// colatitude phi = 2 atan f, which stays bounded where f blows up on the axis.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "relaxlab/numerics.hpp"

namespace relaxlab {

struct SpherePoint {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    double norm_defect() const { return std::abs(x * x + y * y + z * z - 1.0); }
};

/// A point of the extended plane R^2 u {inf}.
struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
    bool at_infinity = false;

    static PlanePoint infinity() { return {0.0, 0.0, true}; }
};

PlanePoint stereo_project(const SpherePoint& p);
SpherePoint stereo_inverse(const PlanePoint& w);

/// Radial magnitude f >= 0 of a chart point; +inf stands for the south pole.
class ChartValue {
public:
    explicit ChartValue(double v);
    static ChartValue infinity() { return ChartValue(std::numeric_limits<double>::infinity()); }

    double value() const { return value_; }
    bool is_infinite() const { return std::isinf(value_); }
    /// f^2 / (1 + f^2), equal to 1 at infinity.
    double cap_fraction() const;

private:
    double value_;
};

double chart_to_colatitude(ChartValue f);
ChartValue colatitude_to_chart(double phi);

/// Colatitude profile phi(r) of an n-axially symmetric map on a disc or annulus.
class RadialProfile {
public:
    RadialProfile(std::vector<double> grid, std::vector<double> phi, int n);

    std::span<const double> grid() const { return grid_; }
    std::span<const double> phi() const { return phi_; }
    int n() const { return n_; }
    std::size_t size() const { return grid_.size(); }
    double r_front() const { return grid_.front(); }
    double r_back() const { return grid_.back(); }

    ChartValue chart(std::size_t i) const { return colatitude_to_chart(phi_[i]); }
    /// phi at r, linear in log r between nodes.
    double phi_at(double r) const;

private:
    std::vector<double> grid_;
    std::vector<double> phi_;
    int n_;
};

void write_profile_csv(std::ostream& os, const RadialProfile& p);
RadialProfile read_profile_csv(std::istream& is, int n);

double u0_chart(double alpha, int n, double r);
double u_eps_chart(double alpha, int n, double eps, double r);

RadialProfile u0_profile(double alpha, int n, std::span<const double> grid);
/// u_eps: alpha r^n outside eps, alpha eps^{2n} r^{-n} inside. Accepts eps in (0, 1].
RadialProfile u_eps_profile(double alpha, int n, double eps, std::span<const double> grid);

/// Build a profile from an arbitrary chart function f(r) >= 0.
RadialProfile profile_from_chart(const std::function<double(double)>& f, int n,
                                 std::span<const double> grid);

/// The cone-dipole map: u0 outside the cones C+ = {z > 1, r < z - 1} and C- = -C+,
/// alpha (z-1)^{2n} r^{-n} inside C+, mirrored in z on C-.
class ConeDipoleMap {
public:
    ConeDipoleMap(double alpha, int n);
    double alpha() const { return alpha_; }
    int n() const { return n_; }

    /// Chart magnitude f at (r, z); +inf on the axis inside the cones.
    double chart(double r, double z) const;

private:
    double alpha_;
    int n_;
};

SpherePoint axial_map_point(double f, int n, double theta);
SpherePoint tilde_u0_value(const ConeDipoleMap& map, double r, double theta, double z);

/// Map evaluator in cylindrical coordinates (r, theta, z).
using AxialMap = std::function<SpherePoint(double r, double theta, double z)>;

struct DegreeResult {
    int degree = 0;
    double flux = 0.0;      // (1/4 pi) times the flux before rounding
    double residual = 0.0;  // |flux - degree|
};

/// Degree of u restricted to the sphere of given radius around a point on the z-axis,
/// as (1/4 pi) times the flux of D(u). The map must be n-axially symmetric, which
/// reduces the surface integral to a polar-angle integral (composite Simpson).
/// Throws std::runtime_error when the residual exceeds 0.1.
DegreeResult degree_from_flux(const AxialMap& u, const Point3& center, double radius,
                              std::size_t panels = 1024);

}  // namespace relaxlab
