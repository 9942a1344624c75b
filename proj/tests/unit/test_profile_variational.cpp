#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "relaxlab/numerics.hpp"
#include "relaxlab/profile_variational.hpp"

using namespace relaxlab;

namespace {

struct Case {
    double s, s_tilde, a, alpha, b;
    int n;
    double t0, tau0, I;
    std::size_t pieces;
};

// reference values from root finding plus adaptive quadrature
const Case cases[] = {
    {0.1, 0.2, 0.1, 0.25, 0.5, 2, 0.3146264369941973, 0.45685025174785665, 0.045272590798478465, 3},
    {0.1, 0.55, 0.1, 0.25, 0.5, 2, 0.3146264369941973, 0.45685025174785665, 0.03485517594862749, 3},
    {0.02, 0.04, 0.01, 0.1, 0.5, 2, 0.19998999874973744, 0.2238875363520722, 0.057215321169521105, 3},
    {0.05, 0.1, 0.05, 0.05, 0.5, 3, 0.13560740106428354, 1.0, 0.05276054554474699, 2},
    {0.1, 1.0, 0.25, 0.25, 0.5, 1, 0.37320508075688774, 1.0, 0.09060805070043647, 2},
    {0.25, 0.625, 0.05, 0.05, 0.5, 2, 1.1166320558678393, 1.0, 0.008394617573245534, 2},
    {0.02, 0.21, 0.01, 0.1, 0.5, 2, 0.19998999874973744, 0.2238875363520722, 0.0002448893388809296, 4},
    {0.1, 0.3, 0.25, 0.25, 0.25, 2, 0.1, 1.0, 0.5756462732485114, 2},
};

ConeConstraint cone_of(const Case& k) { return {k.s, k.s_tilde, k.a, k.alpha, k.b}; }

double rel(double x, double y) { return std::abs(x - y) / std::max(std::abs(y), 1e-300); }

// increasing map of [0, 1] onto itself with a random shape and bounded slope
struct Shape {
    double w;
    int p, q;
    double v(double u) const { return w * std::pow(u, p) + (1 - w) * (1 - std::pow(1 - u, q)); }
    double d(double u) const { return w * p * std::pow(u, p - 1) + (1 - w) * q * std::pow(1 - u, q - 1); }
};

}  // namespace

TEST_CASE("eta and zeta hit their boundary values and solve the Euler-Lagrange equation") {
    const auto e = eta_profile(0.4, 0.1, 0.1, 0.5, 2);
    CHECK(e.value(0.1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.value(0.4) == doctest::Approx(0.1).epsilon(1e-14));
    const auto z = zeta_profile(0.4, 0.1, 0.25, 2);
    CHECK(z.value(0.4) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(z.value(1.0) == doctest::Approx(0.25).epsilon(1e-14));
    for (double r = 0.1; r <= 1.0; r += 0.05) {
        CHECK(std::abs(e.euler_lagrange_residual(r)) < 1e-8);
        CHECK(std::abs(z.euler_lagrange_residual(r)) < 1e-8);
        const double h = 1e-5 * r;
        CHECK(e.derivative(r) == doctest::Approx((e.value(r + h) - e.value(r - h)) / (2 * h)).epsilon(1e-7));
        CHECK(e.second_derivative(r) ==
              doctest::Approx((e.derivative(r + h) - e.derivative(r - h)) / (2 * h)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(eta_profile(0.1, 0.1, 0.1, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(zeta_profile(1.0, 0.1, 0.25, 2), std::invalid_argument);
}

TEST_CASE("t0 and tau0") {
    CHECK(compute_t0(0.1, 0.1, 0.5, 2) == doctest::Approx(0.3146264369941973).epsilon(1e-13));
    CHECK(compute_t0(0.1, 0.5, 0.5, 2) == 0.1);
    CHECK(compute_tau0(0.05, 0.25, 2) == doctest::Approx(0.31783724519578227).epsilon(1e-13));
    CHECK(compute_tau0(0.1, 0.1, 3) == 1.0);
    CHECK_THROWS_AS(compute_t0(0.1, 0.6, 0.5, 2), std::invalid_argument);
    CHECK_THROWS_AS(compute_tau0(0.3, 0.25, 2), std::invalid_argument);

    SUBCASE("zero slope at the junction") {
        const double t0 = compute_t0(0.05, 0.02, 0.5, 3);
        CHECK(std::abs(eta_profile(t0, 0.05, 0.02, 0.5, 3).derivative(t0)) < 1e-9);
        const double tau0 = compute_tau0(0.02, 0.2, 3);
        CHECK(std::abs(zeta_profile(tau0, 0.02, 0.2, 3).derivative(tau0)) < 1e-9);
    }
    SUBCASE("small a: t0^n approaches 2 b s^n / a") {
        for (double a : {1e-3, 1e-4, 1e-5}) {
            const double t0 = compute_t0(0.01, a, 0.5, 2);
            CHECK(std::pow(t0, 2) * a / (2 * 0.5 * 1e-4) == doctest::Approx(1.0).epsilon(2 * a * a / 0.25));
        }
    }
    SUBCASE("the chosen roots are the right ones") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            const int n = 1 + i % 4;
            const double alpha = 0.01 + 0.24 * U(rng), a = alpha * (0.01 + 0.99 * U(rng));
            const double b = 0.25 + 0.25 * U(rng), s = 0.001 + 0.5 * U(rng);
            const double t0 = compute_t0(s, a, b, n);
            const double tau0 = compute_tau0(a, alpha, n);
            CHECK(t0 >= s);
            CHECK(tau0 <= 1.0);
            CHECK(std::pow(tau0, n) >= 0.5 * a / alpha);
            CHECK(std::pow(t0, n) <= 2 * b * std::pow(s, n) / a * (1 + 1e-12));
            if (t0 > s * (1 + 1e-6)) CHECK(std::abs(eta_profile(t0, s, a, b, n).derivative(t0)) < 1e-9 * b / s);
            if (tau0 < 1 - 1e-6) CHECK(std::abs(zeta_profile(tau0, a, alpha, n).derivative(tau0)) < 1e-9 * alpha);
        }
    }
}

TEST_CASE("g0 against reference values") {
    for (const auto& k : cases) {
        CAPTURE(k.s);
        CAPTURE(k.s_tilde);
        const auto g = g0_construct(cone_of(k), k.n);
        CHECK(rel(g.t0, k.t0) < 1e-11);
        CHECK(rel(g.tau0, k.tau0) < 1e-11);
        CHECK(g.pieces.size() == k.pieces);
        CHECK(rel(g.I_closed(), k.I) < 1e-9);
    }
}

TEST_CASE("g0 is continuous, pinned and monotone on each side") {
    for (const auto& k : cases) {
        const auto c = cone_of(k);
        const auto g = g0_construct(c, k.n);
        CHECK(g.value(c.s) == doctest::Approx(c.b).epsilon(1e-12));
        CHECK(g.value(c.s_tilde) == doctest::Approx(c.a).epsilon(1e-12));
        CHECK(g.value(1.0) == doctest::Approx(c.alpha).epsilon(1e-12));
        for (std::size_t i = 0; i + 1 < g.pieces.size(); ++i) {
            const double r = g.pieces[i].r_hi;
            CHECK(g.pieces[i].value(r) == doctest::Approx(g.pieces[i + 1].value(r)).epsilon(1e-12));
        }
        std::vector<double> br{c.s, c.s_tilde, 1.0};
        br.erase(std::unique(br.begin(), br.end()), br.end());
        const auto grid = log_grid_with_breaks(br, 400);
        const auto v = g.sample(grid);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            if (grid[i + 1] <= c.s_tilde) CHECK(v[i + 1] <= v[i] + 1e-14);
            if (grid[i] >= c.s_tilde) CHECK(v[i + 1] >= v[i] - 1e-14);
        }
        CHECK_THROWS_AS(g.value(0.5 * c.s), std::out_of_range);
    }
}

TEST_CASE("g0 satisfies the variational inequality against admissible competitors") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> P(1, 4);
    std::uniform_real_distribution<double> W(0.0, 1.0);
    for (const auto& k : cases) {
        const auto c = cone_of(k);
        const auto g = g0_construct(c, k.n);
        const double xs = std::log(c.s), xt = std::log(c.s_tilde);
        for (int trial = 0; trial < 50; ++trial) {
            const Shape L{W(rng), P(rng), P(rng)}, R{W(rng), P(rng), P(rng)};
            double sigma = -1.0;
            const ProfilePiece* piece = nullptr;
            // competitor h in log r; derivative d/dx
            auto h = [&](double x, double& hx) {
                if (sigma < 0) {
                    const double u = (xt - x) / (xt - xs);
                    hx = -(c.b - c.a) * L.d(u) / (xt - xs);
                    return c.a + (c.b - c.a) * L.v(u);
                }
                const double u = (x - xt) / (0.0 - xt);
                hx = (c.alpha - c.a) * R.d(u) / (0.0 - xt);
                return c.a + (c.alpha - c.a) * R.v(u);
            };
            auto integrand = [&](double x) {
                const double r = std::exp(x);
                const double g_x = r * piece->derivative(r), gv = piece->value(r);
                double hx = 0.0;
                const double hv = h(x, hx);
                const double res = sigma * g_x - k.n * gv;
                return 2 * res * (sigma * (hx - g_x) - k.n * (hv - gv));
            };
            double d = 0.0;
            for (const auto& p : g.pieces) {
                piece = &p;
                sigma = p.r_hi <= c.s_tilde ? -1.0 : 1.0;
                d += simpson(integrand, std::log(p.r_lo), std::log(p.r_hi), 2000);
            }
            CAPTURE(k.s_tilde);
            CHECK(d >= -1e-8);
        }
    }
}

TEST_CASE("I_functional") {
    const auto r = log_grid(0.1, 1.0, 4001);
    std::vector<double> up(r.size()), flat(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        up[i] = 0.3 * r[i] * r[i];
        flat[i] = 0.2;
    }
    CHECK(I_functional(r, up, 2) < 1e-12);
    CHECK(I_functional(r, flat, 2) == doctest::Approx(4 * 0.04 * std::log(10.0)).epsilon(1e-12));
    CHECK_THROWS_AS(I_functional(r, std::vector<double>(3, 0.0), 2), std::invalid_argument);
}

TEST_CASE("cone objective: gradient and convexity") {
    const ConeConstraint c{0.1, 0.4, 0.1, 0.25, 0.5};
    const auto grid = cone_grid(c, 2, 64);
    CHECK(grid.r[grid.i_tilde] == 0.4);
    const std::size_t m = grid.r.size();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.0, 0.5);
    std::vector<double> g(m), grad(m), tmp(m), none;
    for (int trial = 0; trial < 20; ++trial) {
        for (auto& v : g) v = U(rng);
        cone_objective(grid, g, grad);
        for (std::size_t i : {std::size_t{0}, grid.i_tilde / 2, grid.i_tilde, m - 2, m - 1}) {
            const double h = 1e-6;
            tmp = g;
            tmp[i] += h;
            const double fp = cone_objective(grid, tmp, none);
            tmp[i] -= 2 * h;
            const double fm = cone_objective(grid, tmp, none);
            const double fd = (fp - fm) / (2 * h);
            CHECK(std::abs(fd - grad[i]) <= 1e-6 * std::max(1.0, std::abs(grad[i])));
        }
        std::vector<double> h(m), mid(m);
        for (auto& v : h) v = U(rng);
        for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (g[i] + h[i]);
        CHECK(cone_objective(grid, mid, none) <=
              0.5 * (cone_objective(grid, g, none) + cone_objective(grid, h, none)) + 1e-14);
    }

    SUBCASE("projection lands in the cone") {
        for (auto& v : g) v = U(rng);
        project_to_cone(grid, c, g);
        CHECK(g.front() == 0.5);
        CHECK(g[grid.i_tilde] == 0.1);
        CHECK(g.back() == 0.25);
        for (std::size_t i = 0; i + 1 < m; ++i) {
            if (i + 1 <= grid.i_tilde) CHECK(g[i + 1] <= g[i]);
            else CHECK(g[i + 1] >= g[i]);
        }
        // on the cone the fixed-sign objective equals I_functional
        CHECK(cone_objective(grid, g, none) == doctest::Approx(I_functional(grid.r, g, 2)).epsilon(1e-12));
    }
}

TEST_CASE("numerical minimiser matches g0") {
    for (const auto& k : cases) {
        const auto c = cone_of(k);
        const auto g0 = g0_construct(c, k.n);
        const auto num = minimize_I_numerical(c, k.n, 512);
        CHECK(num.converged);
        const double discrete = I_functional(num.r, g0.sample(num.r), k.n);
        CHECK(num.objective <= discrete * (1 + 1e-7));
        CHECK(rel(num.objective, discrete) < 1e-4);
        CHECK(rel(num.objective, g0.I_closed()) < 2e-2);
    }
    SUBCASE("refining the grid moves the optimum toward the closed form") {
        const auto c = cone_of(cases[0]);
        const double exact = g0_construct(c, 2).I_closed();
        const double e1 = rel(minimize_I_numerical(c, 2, 128).objective, exact);
        const double e2 = rel(minimize_I_numerical(c, 2, 512).objective, exact);
        CHECK(e2 < e1);
    }
    CHECK_THROWS_AS(minimize_I_numerical(cone_of(cases[0]), 2, 10), std::invalid_argument);
}

TEST_CASE("cone validation") {
    CHECK_THROWS_AS(ConeConstraint({0.5, 0.4, 0.1, 0.25, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ConeConstraint({0.1, 0.4, 0.3, 0.25, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ConeConstraint({0.1, 0.4, 0.1, 0.3, 0.5}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ConeConstraint({0.1, 0.4, 0.1, 0.25, 0.2}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ConeConstraint({0.1, 1.0, 0.1, 0.25, 0.5}).validate(), std::invalid_argument);
    CHECK_NOTHROW(ConeConstraint({0.1, 1.0, 0.25, 0.25, 0.5}).validate());
}

TEST_CASE("gap lower bound") {
    const auto gb = gap_lower_bound({0.1, 0.2, 0.1, 0.25, 0.5}, 2);
    CHECK_FALSE(gb.vacuous);
    CHECK(gb.value == doctest::Approx(pi * 4 * 0.01 * std::log(0.45685025174785665 / 0.3146264369941973)).epsilon(1e-11));
    const auto vac = gap_lower_bound({0.25, 0.625, 0.05, 0.05, 0.5}, 2);
    CHECK(vac.vacuous);
    CHECK(vac.value == 0.0);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const int n = 1 + i % 3;
        const double alpha = 0.01 + 0.24 * U(rng), a = alpha * (0.01 + 0.99 * U(rng));
        const double s = a * (1 + 20 * U(rng));
        if (s >= 0.9) continue;
        const ConeConstraint c{s, 0.5 * (s + 1), a, alpha, 0.5};
        const auto b = gap_lower_bound(c, n);
        CHECK(b.ratio <= b.ratio_bound * (1 + 1e-12));
        // the bound never exceeds the exact minimum of pi I
        CHECK(b.value <= pi * g0_construct(c, n).I_closed() * (1 + 1e-12));
    }
}
