#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "relaxlab/sphere_geometry.hpp"

namespace relaxlab {

/// A z-interval of the axis carrying the vertical current with multiplicity n.
struct DefectInterval {
    double z_lo = 0.0;
    double z_hi = 0.0;
    double length() const { return z_hi - z_lo; }
};

/// Colatitude phi(r, z) on a tensor grid plus the vertical defect set on the axis.
///
/// phi is stored z-major: phi[k * nr + j] is the value at (r_grid[j], z_grid[k]).
/// The pair (u, L) is consistent when the axis value of phi (at the smallest radius)
/// flips between the poles exactly where a defect interval starts or ends; away
/// from endpoints, "inside a defect" XOR "axis value near the south pole" is the
/// same for every z-node.
class MeridianField {
public:
    MeridianField(std::vector<double> r_grid, std::vector<double> z_grid, std::vector<double> phi,
                  int n, std::vector<DefectInterval> defects);

    std::span<const double> r_grid() const { return r_; }
    std::span<const double> z_grid() const { return z_; }
    std::span<const double> phi() const { return phi_; }
    const std::vector<DefectInterval>& defects() const { return defects_; }
    int n() const { return n_; }
    std::size_t nr() const { return r_.size(); }
    std::size_t nz() const { return z_.size(); }

    double at(std::size_t j, std::size_t k) const { return phi_[k * r_.size() + j]; }
    /// Radial slice at z_grid[k].
    RadialProfile slice(std::size_t k) const;
    /// Index of the z-node equal to z (relative tolerance 1e-12); throws when off-grid.
    std::size_t z_index(double z) const;

    bool in_defect(double z) const;
    double defect_length() const;

private:
    std::vector<double> r_;
    std::vector<double> z_;
    std::vector<double> phi_;
    int n_;
    std::vector<DefectInterval> defects_;
};

/// Field equal to the given profile on every z-node.
MeridianField extrude_profile(const RadialProfile& p, std::span<const double> z_grid,
                              std::vector<DefectInterval> defects);

/// CSV with header r,z,phi (z-major rows).
void write_field_csv(std::ostream& os, const MeridianField& f);
/// Sidecar JSON: {"n": n, "defects": [[z_lo, z_hi], ...]}.
void write_defects_json(std::ostream& os, const MeridianField& f);
MeridianField read_field(std::istream& csv, std::istream& defects_json);

}  // namespace relaxlab
