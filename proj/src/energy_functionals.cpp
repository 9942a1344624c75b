#include "relaxlab/energy_functionals.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace relaxlab {

namespace {

struct CellTerms {
    double energy;
    double area;
    double gap;
};

// One cell of log-width dx between colatitudes p0 and p1.
CellTerms cell_terms(double dx, double p0, double p1, int n) {
    const double half = 0.5 * std::abs(p1 - p0);
    const double slope = 2.0 * std::sin(half) / dx;
    const double s = std::sin(0.5 * (p0 + p1));
    const double nn = static_cast<double>(n);
    CellTerms t{};
    t.energy = pi * (slope * slope + nn * nn * s * s) * dx;
    // 2 pi n |cos p0 - cos p1| written without cancellation
    t.area = 4.0 * pi * nn * s * std::sin(half);
    const double d = slope - nn * s;
    t.gap = pi * d * d * dx;
    return t;
}

// Accumulate cell terms of p over [iv.lo, iv.hi]; partial end cells use phi
// interpolated linearly in log r.
CellTerms integrate(const RadialProfile& p, Interval iv) {
    const auto r = p.grid();
    const auto phi = p.phi();
    const double tol = 1e-12;
    if (iv.lo > iv.hi) throw std::invalid_argument("interval: lo > hi");
    if (iv.lo < r.front() * (1.0 - tol) || iv.hi > r.back() * (1.0 + tol)) {
        throw std::out_of_range("interval outside the profile grid");
    }
    const double lo = std::clamp(iv.lo, r.front(), r.back());
    const double hi = std::clamp(iv.hi, r.front(), r.back());

    CompensatedSum e, a, g;
    auto add = [&](double x0, double x1, double p0, double p1) {
        if (!(x1 > x0)) return;
        const CellTerms t = cell_terms(std::log(x1 / x0), p0, p1, p.n());
        e.add(t.energy);
        a.add(t.area);
        g.add(t.gap);
    };

    double x_prev = lo;
    double p_prev = p.phi_at(lo);
    auto it = std::upper_bound(r.begin(), r.end(), lo);
    for (; it != r.end() && *it < hi; ++it) {
        const auto j = static_cast<std::size_t>(it - r.begin());
        add(x_prev, r[j], p_prev, phi[j]);
        x_prev = r[j];
        p_prev = phi[j];
    }
    add(x_prev, hi, p_prev, p.phi_at(hi));
    return {e.value(), a.value(), g.value()};
}

Interval full(const RadialProfile& p) { return {p.r_front(), p.r_back()}; }

}  // namespace

nlohmann::json to_json(const EnergyReport& r) {
    return {{"E", r.E}, {"A", r.A}, {"gap", r.gap}, {"mass_term", r.mass_term}, {"total", r.total}};
}

double dirichlet_energy_radial(const RadialProfile& p, Interval iv) { return integrate(p, iv).energy; }
double dirichlet_energy_radial(const RadialProfile& p) { return dirichlet_energy_radial(p, full(p)); }
double area_radial(const RadialProfile& p, Interval iv) { return integrate(p, iv).area; }
double area_radial(const RadialProfile& p) { return area_radial(p, full(p)); }
double conformality_gap(const RadialProfile& p, Interval iv) { return integrate(p, iv).gap; }
double conformality_gap(const RadialProfile& p) { return conformality_gap(p, full(p)); }

double monotone_area_bound(ChartValue a, ChartValue b, int n) {
    if (n < 1) throw std::invalid_argument("monotone_area_bound: n must be >= 1");
    return 4.0 * pi * n * std::abs(b.cap_fraction() - a.cap_fraction());
}

double conformal_slice_energy(double alpha, int n) {
    return monotone_area_bound(ChartValue(0.0), ChartValue(alpha), n);
}

namespace detail {

std::vector<double> radial_weights(std::span<const double> r) {
    std::vector<double> w(r.size(), 0.0);
    for (std::size_t j = 0; j + 1 < r.size(); ++j) {
        const double dr = r[j + 1] - r[j];
        w[j] += 0.5 * dr * r[j];
        w[j + 1] += 0.5 * dr * r[j + 1];
    }
    return w;
}

double meridian_energy(std::span<const double> r, std::span<const double> z,
                       std::span<const double> phi, int n, std::span<double> grad) {
    const std::size_t nr = r.size();
    const std::size_t nz = z.size();
    if (nz < 2 || nr < 2 || phi.size() != nr * nz) {
        throw std::invalid_argument("meridian_energy: inconsistent grid sizes");
    }
    const bool want_grad = !grad.empty();
    if (want_grad) std::fill(grad.begin(), grad.end(), 0.0);

    const double nn2 = static_cast<double>(n) * n;
    std::vector<double> wz(nz, 0.0);
    for (std::size_t k = 0; k + 1 < nz; ++k) {
        const double dz = z[k + 1] - z[k];
        wz[k] += 0.5 * dz;
        wz[k + 1] += 0.5 * dz;
    }
    std::vector<double> dx(nr - 1);
    for (std::size_t j = 0; j + 1 < nr; ++j) dx[j] = std::log(r[j + 1] / r[j]);
    const std::vector<double> wr = radial_weights(r);

    CompensatedSum total;
    // radial gradient and potential: per z-node, per r-cell
    for (std::size_t k = 0; k < nz; ++k) {
        const std::size_t row = k * nr;
        for (std::size_t j = 0; j + 1 < nr; ++j) {
            const double p0 = phi[row + j];
            const double p1 = phi[row + j + 1];
            const double delta = p1 - p0;
            const double chord = 2.0 * std::sin(0.5 * delta);
            const double m = 0.5 * (p0 + p1);
            const double s = std::sin(m);
            total.add(pi * wz[k] * (chord * chord / dx[j] + nn2 * s * s * dx[j]));
            if (want_grad) {
                const double g_chord = pi * wz[k] * 2.0 * std::sin(delta) / dx[j];
                const double g_pot = pi * wz[k] * nn2 * dx[j] * 0.5 * std::sin(2.0 * m);
                grad[row + j] += -g_chord + g_pot;
                grad[row + j + 1] += g_chord + g_pot;
            }
        }
    }
    // z gradient: per r-node, per z-cell
    for (std::size_t k = 0; k + 1 < nz; ++k) {
        const double dz = z[k + 1] - z[k];
        for (std::size_t j = 0; j < nr; ++j) {
            const double delta = phi[(k + 1) * nr + j] - phi[k * nr + j];
            const double chord = 2.0 * std::sin(0.5 * delta);
            total.add(pi * wr[j] * chord * chord / dz);
            if (want_grad) {
                const double g = pi * wr[j] * 2.0 * std::sin(delta) / dz;
                grad[k * nr + j] -= g;
                grad[(k + 1) * nr + j] += g;
            }
        }
    }
    return total.value();
}

}  // namespace detail

EnergyReport energy_3d(const MeridianField& field) {
    EnergyReport rep;
    rep.E = detail::meridian_energy(field.r_grid(), field.z_grid(), field.phi(), field.n(), {});

    const auto z = field.z_grid();
    CompensatedSum area;
    for (std::size_t k = 0; k < field.nz(); ++k) {
        double w = 0.0;
        if (k > 0) w += 0.5 * (z[k] - z[k - 1]);
        if (k + 1 < field.nz()) w += 0.5 * (z[k + 1] - z[k]);
        area.add(w * area_radial(field.slice(k)));
    }
    rep.A = area.value();
    rep.gap = rep.E - rep.A;
    rep.mass_term = 4.0 * pi * field.n() * field.defect_length();
    rep.total = rep.E + rep.mass_term;
    return rep;
}

double psi_gain(const MeridianField& field, double z, double alpha) {
    const std::size_t k = field.z_index(z);
    const int n = field.n();
    return 4.0 * pi * n + conformal_slice_energy(alpha, n) - dirichlet_energy_radial(field.slice(k));
}

}  // namespace relaxlab
