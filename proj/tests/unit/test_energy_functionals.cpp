#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "relaxlab/energy_functionals.hpp"
#include "relaxlab/meridian_field.hpp"

using namespace relaxlab;

namespace {

constexpr double slice_u0 = 1.478396542865785;  // 4 pi n alpha^2/(1+alpha^2), n = 2, alpha = 1/4

RadialProfile chart_profile(std::function<double(double)> f, int n, std::size_t nodes = 2048,
                            double r_min = 1e-6, double r_max = 1.0) {
    return profile_from_chart(std::move(f), n, log_grid(r_min, r_max, nodes));
}

// random profile: a smooth random walk of the chart in log scale
RadialProfile random_profile(std::mt19937_64& rng, int n, bool monotone) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto grid = log_grid(1e-3, 1.0, 400);
    std::vector<double> phi(grid.size());
    double v = U(rng) * pi;
    const double step = 0.02 * (0.5 + U(rng));
    const double dir = U(rng) < 0.5 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        phi[i] = v;
        double dv = monotone ? dir * step * U(rng) : step * (U(rng) - 0.5) * 4.0;
        v = std::clamp(v + dv, 0.0, pi);
    }
    if (!monotone) {
        // force at least one genuine turn
        const std::size_t m = grid.size() / 2;
        for (std::size_t i = m; i < m + 40; ++i) phi[i] = std::clamp(phi[m] + 0.02 * (i - m), 0.0, pi);
        for (std::size_t i = m + 40; i < m + 80; ++i) phi[i] = std::clamp(phi[m + 39] - 0.02 * (i - m - 39), 0.0, pi);
    }
    return RadialProfile(grid, phi, n);
}

}  // namespace

TEST_CASE("radial energies of simple profiles") {
    const auto grid = log_grid(1e-6, 1.0, 2048);
    const RadialProfile zero(grid, std::vector<double>(grid.size(), 0.0), 2);
    CHECK(dirichlet_energy_radial(zero) == 0.0);
    CHECK(area_radial(zero) == 0.0);

    const auto u0 = u0_profile(0.25, 2, grid);
    CHECK(dirichlet_energy_radial(u0) == doctest::Approx(slice_u0).epsilon(1e-6));
    CHECK(area_radial(u0) == doctest::Approx(slice_u0).epsilon(1e-6));
    CHECK(conformality_gap(u0) < 1e-8);

    // full cover: phi from pi down to 0
    const auto full = chart_profile([](double r) { return 1e-3 * std::pow(r, -3) / (1 + 1e3 * r * r * r); }, 3,
                                    4096, 1e-6, 10.0);
    CHECK(area_radial(full) == doctest::Approx(12.0 * pi).epsilon(1e-6));
}

TEST_CASE("monotone_area_bound closed form") {
    CHECK(monotone_area_bound(ChartValue(0.3), ChartValue(0.3), 2) == 0.0);
    CHECK(monotone_area_bound(ChartValue(0.0), ChartValue::infinity(), 2) == doctest::Approx(8.0 * pi));
    CHECK(monotone_area_bound(ChartValue(0.1), ChartValue(0.5), 2) == doctest::Approx(4.77770922367715).epsilon(1e-13));
    CHECK(conformal_slice_energy(0.25, 2) == doctest::Approx(slice_u0).epsilon(1e-14));
}

TEST_CASE("area equals the bound exactly when monotone, exceeds it otherwise") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        const int n = 1 + i % 3;
        const auto p = random_profile(rng, n, true);
        const double bound = monotone_area_bound(p.chart(0), p.chart(p.size() - 1), n);
        CHECK(area_radial(p) == doctest::Approx(bound).epsilon(1e-8));
        const auto q = random_profile(rng, n, false);
        const double qb = monotone_area_bound(q.chart(0), q.chart(q.size() - 1), n);
        CHECK(area_radial(q) > qb + 1e-8);
    }
}

TEST_CASE("E >= A, and E - A agrees with the gap") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto p = random_profile(rng, 1 + i % 4, i % 2 == 0);
        const double E = dirichlet_energy_radial(p), A = area_radial(p), G = conformality_gap(p);
        CHECK(E - A >= -1e-10);
        CHECK(G == doctest::Approx(E - A).epsilon(1e-8));
    }
}

TEST_CASE("conformal and anti-conformal branches have no gap") {
    for (int n = 1; n <= 3; ++n) {
        for (double c : {0.1, 1.0, 7.0}) {
            const auto up = chart_profile([&](double r) { return c * std::pow(r, n); }, n, 4096, 1e-3, 1.0);
            const auto dn = chart_profile([&](double r) { return c * std::pow(r, -n); }, n, 4096, 1e-3, 1.0);
            CHECK(conformality_gap(up) <= 1e-8 * dirichlet_energy_radial(up));
            CHECK(conformality_gap(dn) <= 1e-8 * dirichlet_energy_radial(dn));
        }
    }
}

TEST_CASE("constant chart on [t, tau] costs 4 pi n^2 a^2 log(tau/t) / (1+a^2)^2") {
    const double a = 0.05, t = 0.1, tau = 0.6;
    const int n = 2;
    const auto p = chart_profile([&](double) { return a; }, n, 64, t, tau);
    const double expect = 4.0 * pi * n * n * a * a * std::log(tau / t) / std::pow(1 + a * a, 2);
    CHECK(conformality_gap(p) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(area_radial(p) == 0.0);
}

TEST_CASE("dilation invariance of the radial energy") {
    const auto grid = log_grid(1e-4, 1.0, 600);
    const auto p = u_eps_profile(0.2, 2, 0.3, grid);
    const double E = dirichlet_energy_radial(p);
    for (double lam : {0.1, 0.5, 3.0, 10.0}) {
        std::vector<double> g2(grid.begin(), grid.end());
        for (double& r : g2) r *= lam;
        const RadialProfile q(g2, std::vector<double>(p.phi().begin(), p.phi().end()), 2);
        CHECK(dirichlet_energy_radial(q) == doctest::Approx(E).epsilon(1e-9));
    }
}

TEST_CASE("sub-intervals add up and out-of-grid intervals are rejected") {
    const auto p = u0_profile(0.25, 2, log_grid(1e-3, 1.0, 300));
    const double whole = dirichlet_energy_radial(p);
    const double split = dirichlet_energy_radial(p, {1e-3, 0.37}) + dirichlet_energy_radial(p, {0.37, 1.0});
    CHECK(split == doctest::Approx(whole).epsilon(1e-6));
    CHECK_THROWS_AS(dirichlet_energy_radial(p, {1e-4, 0.5}), std::out_of_range);
    CHECK_THROWS_AS(area_radial(p, {0.5, 2.0}), std::out_of_range);
    CHECK_THROWS_AS(conformality_gap(p, {0.6, 0.5}), std::invalid_argument);
}

TEST_CASE("T0 energy on the cylinder") {
    const auto grid = log_grid(1e-6, 1.0, 2048);
    const auto z = uniform_grid(-1.0, 1.0, 9);
    const auto field = extrude_profile(u0_profile(0.25, 2, grid), z, {{-1.0, 1.0}});
    const EnergyReport rep = energy_3d(field);
    CHECK(rep.total == doctest::Approx(53.22227554316826).epsilon(1e-6));
    CHECK(rep.mass_term == doctest::Approx(16.0 * pi));
    CHECK(rep.gap == doctest::Approx(rep.E - rep.A).epsilon(1e-10));
    CHECK(rep.total == rep.E + rep.mass_term);
    CHECK(psi_gain(field, 0.0, 0.25) == doctest::Approx(8.0 * pi).epsilon(1e-7));
    CHECK_THROWS_AS(psi_gain(field, 0.1, 0.25), std::invalid_argument);

    const auto flat = extrude_profile(RadialProfile(grid, std::vector<double>(grid.size(), 0.0), 2), z, {});
    CHECK(energy_3d(flat).total == 0.0);
}

TEST_CASE("energy_3d splits into slices, z-gradient and mass") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const auto r = log_grid(1e-2, 1.0, 40);
    const auto z = uniform_grid(-0.5, 0.5, 21);
    std::vector<double> phi(r.size() * z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            const bool inside = std::abs(z[k]) < 0.26;
            const double axis = inside ? 0.01 * U(rng) : pi - 0.01 * U(rng);
            phi[k * r.size() + j] = j == 0 ? axis : 0.3 + 0.5 * U(rng) + 0.3 * z[k];
        }
    }
    const MeridianField f(r, z, phi, 2, {{-0.26, 0.26}});
    const EnergyReport rep = energy_3d(f);

    CompensatedSum slices, zpart;
    for (std::size_t k = 0; k < z.size(); ++k) {
        double w = 0.0;
        if (k > 0) w += 0.5 * (z[k] - z[k - 1]);
        if (k + 1 < z.size()) w += 0.5 * (z[k + 1] - z[k]);
        slices.add(w * dirichlet_energy_radial(f.slice(k)));
    }
    const auto wr = detail::radial_weights(r);
    for (std::size_t j = 0; j < r.size(); ++j) {
        for (std::size_t k = 0; k + 1 < z.size(); ++k) {
            const double c = 2.0 * std::sin(0.5 * (f.at(j, k + 1) - f.at(j, k)));
            zpart.add(pi * wr[j] * c * c / (z[k + 1] - z[k]));
        }
    }
    CHECK(rep.E == doctest::Approx(slices.value() + zpart.value()).epsilon(1e-9));
    CHECK(rep.mass_term == doctest::Approx(4.0 * pi * 2 * 0.52).epsilon(1e-14));
    CHECK(zpart.value() > 0.0);
}

TEST_CASE("meridian energy gradient matches finite differences") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> U(0.0, pi);
    const auto r = log_grid(1e-2, 1.0, 9);
    const auto z = uniform_grid(-0.3, 0.4, 7);
    std::vector<double> phi(r.size() * z.size());
    for (double& v : phi) v = U(rng);
    std::vector<double> grad(phi.size());
    detail::meridian_energy(r, z, phi, 3, grad);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double h = 1e-6;
        auto pp = phi, pm = phi;
        pp[i] += h;
        pm[i] -= h;
        const double fd = (detail::meridian_energy(r, z, pp, 3, {}) - detail::meridian_energy(r, z, pm, 3, {})) / (2 * h);
        CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6).scale(1e-3));
    }
}

TEST_CASE("MeridianField consistency and i/o") {
    const auto r = log_grid(1e-3, 1.0, 10);
    const auto z = uniform_grid(-1.0, 1.0, 5);
    const auto u0 = u0_profile(0.25, 2, r);
    // u0 with a full-axis defect, and its complement: south pole on the axis, no defect
    CHECK_NOTHROW(extrude_profile(u0, z, {{-1.0, 1.0}}));
    std::vector<double> south(r.size(), pi);
    CHECK_NOTHROW(extrude_profile(RadialProfile(r, south, 2), z, {}));
    // a defect over half the axis while the axis value never flips is inconsistent
    CHECK_THROWS_AS(extrude_profile(u0, z, {{-1.0, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(extrude_profile(u0, z, {{-0.5, 0.5}, {0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(extrude_profile(u0, z, {{-2.0, 1.0}}), std::invalid_argument);

    const auto f = extrude_profile(u0, z, {{-1.0, 1.0}});
    CHECK(f.defect_length() == 2.0);
    CHECK(f.in_defect(0.3));
    CHECK(f.z_index(0.5) == 3);
    CHECK_THROWS_AS(f.z_index(0.4), std::invalid_argument);

    std::stringstream csv, js;
    write_field_csv(csv, f);
    write_defects_json(js, f);
    const auto g = read_field(csv, js);
    CHECK(g.nr() == f.nr());
    CHECK(g.nz() == f.nz());
    CHECK(g.n() == 2);
    CHECK(energy_3d(g).total == doctest::Approx(energy_3d(f).total).epsilon(1e-14));

    std::vector<double> bad(r.size() * z.size(), 0.0);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(MeridianField(r, z, bad, 2, {}), std::invalid_argument);
}
