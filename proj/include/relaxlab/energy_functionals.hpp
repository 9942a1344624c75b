#pragma once

// Dirichlet energy, area with multiplicity and the conformality gap of
// n-axially symmetric maps, in colatitude variables:
//
//   E   = pi   int (phi'^2 + n^2 sin^2 phi / r^2) r dr
//   A   = 2 pi n int sin phi |phi'| dr
//   E-A = pi   int (|phi'| - n sin phi / r)^2 r dr
//
// All three use the same cell rule in x = log r. On a cell with log-width dx and
// end values p0, p1 the slope is the chord 2 sin(|p1 - p0| / 2) / dx and sin phi is
// taken at the midpoint value. The area cell is then exactly 2 pi n |cos p0 - cos p1|,
// so E - A is the gap integral to round-off, E >= A holds cell by cell, and the
// area of a monotone profile telescopes to the closed-form bound.

#include <span>

#include <json.hpp>

#include "relaxlab/meridian_field.hpp"
#include "relaxlab/numerics.hpp"
#include "relaxlab/sphere_geometry.hpp"

namespace relaxlab {

struct EnergyReport {
    double E = 0.0;          // Dirichlet energy
    double A = 0.0;          // area counted with multiplicity
    double gap = 0.0;        // E - A
    double mass_term = 0.0;  // 4 pi mass(L)
    double total = 0.0;      // E + mass_term
};

nlohmann::json to_json(const EnergyReport& r);

double dirichlet_energy_radial(const RadialProfile& p, Interval iv);
double dirichlet_energy_radial(const RadialProfile& p);
double area_radial(const RadialProfile& p, Interval iv);
double area_radial(const RadialProfile& p);
double conformality_gap(const RadialProfile& p, Interval iv);
double conformality_gap(const RadialProfile& p);

/// 4 pi n |b^2/(1+b^2) - a^2/(1+a^2)|: the area of a monotone profile running from a to b.
double monotone_area_bound(ChartValue a, ChartValue b, int n);

/// (1/2) int |grad u|^2 over the meridian grid (times 2 pi in theta), plus 4 pi n |defect|.
EnergyReport energy_3d(const MeridianField& field);

/// 4 pi n + 4 pi n alpha^2/(1+alpha^2) minus the slice energy at z.
double psi_gain(const MeridianField& field, double z, double alpha);

/// Energy of the conformal profile alpha r^n on the unit disc: 4 pi n alpha^2/(1+alpha^2).
double conformal_slice_energy(double alpha, int n);

namespace detail {

/// Discrete meridian energy (no mass term) and its gradient with respect to the
/// nodal phi values (gradient may be empty). Same discretisation as energy_3d.
double meridian_energy(std::span<const double> r_grid, std::span<const double> z_grid,
                       std::span<const double> phi, int n, std::span<double> grad);

/// Trapezoid weights of int r dr on the r-grid.
std::vector<double> radial_weights(std::span<const double> r_grid);

}  // namespace detail

}  // namespace relaxlab
