#include "relaxlab/profile_variational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "relaxlab/isotonic.hpp"
#include "relaxlab/numerics.hpp"

namespace relaxlab {

double ClosedFormProfile::value(double r) const {
    return c_plus * std::pow(r, n) + c_minus * std::pow(r, -n);
}

double ClosedFormProfile::derivative(double r) const {
    return n * (c_plus * std::pow(r, n - 1) - c_minus * std::pow(r, -n - 1));
}

double ClosedFormProfile::second_derivative(double r) const {
    return n * ((n - 1) * c_plus * std::pow(r, n - 2) + (n + 1) * c_minus * std::pow(r, -n - 2));
}

double ClosedFormProfile::euler_lagrange_residual(double r) const {
    return -(derivative(r) + r * second_derivative(r)) + (n * n / r) * value(r);
}

namespace {

void require_order(int n) {
    if (n < 1) throw std::invalid_argument("profile: n must be >= 1");
}

}  // namespace

ClosedFormProfile eta_profile(double t, double s, double a, double b, int n) {
    require_order(n);
    if (!(s > 0.0) || !(t > s)) throw std::invalid_argument("eta_profile: need 0 < s < t");
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("eta_profile: need a, b > 0");
    const double sn = std::pow(s, n);
    const double tn = std::pow(t, n);
    const double den = tn * tn - sn * sn;
    ClosedFormProfile p;
    p.c_plus = (a * tn - b * sn) / den;
    p.c_minus = sn * tn * (b * tn - a * sn) / den;
    p.r_a = s;
    p.r_b = t;
    p.n = n;
    return p;
}

double compute_t0(double s, double a, double b, int n) {
    require_order(n);
    if (!(s > 0.0)) throw std::invalid_argument("compute_t0: need s > 0");
    if (!(a > 0.0)) throw std::invalid_argument("compute_t0: need a > 0");
    if (a > b) throw std::invalid_argument("compute_t0: need a <= b");
    if (a == b) return s;
    const double q = a / b;
    return s * std::pow((1.0 + std::sqrt(1.0 - q * q)) / q, 1.0 / n);
}

ClosedFormProfile zeta_profile(double tau, double a, double alpha, int n) {
    require_order(n);
    if (!(tau > 0.0) || !(tau < 1.0)) throw std::invalid_argument("zeta_profile: need 0 < tau < 1");
    const double tn = std::pow(tau, n);
    const double den = 1.0 - tn * tn;
    ClosedFormProfile p;
    p.c_plus = (alpha - a * tn) / den;
    p.c_minus = tn * (a - alpha * tn) / den;
    p.r_a = tau;
    p.r_b = 1.0;
    p.n = n;
    return p;
}

double compute_tau0(double a, double alpha, int n) {
    require_order(n);
    if (!(a > 0.0)) throw std::invalid_argument("compute_tau0: need a > 0");
    if (a > alpha) throw std::invalid_argument("compute_tau0: need a <= alpha");
    if (a == alpha) return 1.0;
    const double q = a / alpha;
    // (1/q)(1 - sqrt(1 - q^2)) without the cancellation
    return std::pow(q / (1.0 + std::sqrt(1.0 - q * q)), 1.0 / n);
}

void ConeConstraint::validate() const {
    if (!(s > 0.0) || !(s_tilde > s) || !(s_tilde <= 1.0)) {
        throw std::invalid_argument("ConeConstraint: need 0 < s < s_tilde <= 1 (s=" + std::to_string(s) +
                                    ", s_tilde=" + std::to_string(s_tilde) + ")");
    }
    if (!(a > 0.0) || !(a <= alpha) || !(alpha <= 0.25)) {
        throw std::invalid_argument("ConeConstraint: need 0 < a <= alpha <= 1/4");
    }
    if (!(alpha <= b)) throw std::invalid_argument("ConeConstraint: need alpha <= b");
    if (s_tilde == 1.0 && a != alpha) {
        throw std::invalid_argument("ConeConstraint: s_tilde = 1 forces a = alpha");
    }
}

double ProfilePiece::value(double r) const {
    return kind == Kind::constant ? level : closed.value(r);
}

double ProfilePiece::derivative(double r) const {
    return kind == Kind::constant ? 0.0 : closed.derivative(r);
}

double ProfilePiece::I_contribution() const {
    const int n = closed.n;
    switch (kind) {
        case Kind::constant:
            return static_cast<double>(n) * n * level * level * std::log(r_hi / r_lo);
        case Kind::eta:
            // |g'| = -g' leaves -2 n A r^(n-1)
            return 2.0 * n * closed.c_plus * closed.c_plus *
                   (std::pow(r_hi, 2 * n) - std::pow(r_lo, 2 * n));
        case Kind::zeta:
            // |g'| = g' leaves -2 n B r^(-n-1)
            return 2.0 * n * closed.c_minus * closed.c_minus *
                   (std::pow(r_lo, -2 * n) - std::pow(r_hi, -2 * n));
    }
    return 0.0;
}

namespace {

const ProfilePiece& piece_at(const std::vector<ProfilePiece>& pieces, double r) {
    for (const auto& p : pieces) {
        const double tol = 1e-12 * p.r_hi;
        if (r >= p.r_lo - tol && r <= p.r_hi + tol) return p;
    }
    throw std::out_of_range("G0Profile: r outside [s, 1]");
}

ProfilePiece constant_piece(double lo, double hi, double level, int n) {
    ProfilePiece p;
    p.kind = ProfilePiece::Kind::constant;
    p.r_lo = lo;
    p.r_hi = hi;
    p.level = level;
    p.closed.n = n;
    return p;
}

ProfilePiece closed_piece(ProfilePiece::Kind kind, const ClosedFormProfile& f) {
    ProfilePiece p;
    p.kind = kind;
    p.r_lo = f.r_a;
    p.r_hi = f.r_b;
    p.closed = f;
    return p;
}

}  // namespace

double G0Profile::value(double r) const { return piece_at(pieces, r).value(r); }
double G0Profile::derivative(double r) const { return piece_at(pieces, r).derivative(r); }

double G0Profile::I_closed() const {
    CompensatedSum acc;
    for (const auto& p : pieces) acc.add(p.I_contribution());
    return acc.value();
}

std::vector<double> G0Profile::sample(std::span<const double> r_grid) const {
    std::vector<double> g(r_grid.size());
    for (std::size_t i = 0; i < r_grid.size(); ++i) g[i] = value(r_grid[i]);
    return g;
}

G0Profile g0_construct(const ConeConstraint& c, int n) {
    require_order(n);
    c.validate();
    G0Profile g;
    g.cone = c;
    g.n = n;
    g.t0 = compute_t0(c.s, c.a, c.b, n);
    g.tau0 = compute_tau0(c.a, c.alpha, n);

    using K = ProfilePiece::Kind;
    if (g.t0 >= c.s_tilde) {
        g.pieces.push_back(closed_piece(K::eta, eta_profile(c.s_tilde, c.s, c.a, c.b, n)));
    } else {
        if (g.t0 > c.s) g.pieces.push_back(closed_piece(K::eta, eta_profile(g.t0, c.s, c.a, c.b, n)));
        g.pieces.push_back(constant_piece(g.t0, c.s_tilde, c.a, n));
    }

    if (c.s_tilde < 1.0) {
        if (g.tau0 >= 1.0) {
            g.pieces.push_back(constant_piece(c.s_tilde, 1.0, c.a, n));
        } else if (g.tau0 <= c.s_tilde) {
            g.pieces.push_back(closed_piece(K::zeta, zeta_profile(c.s_tilde, c.a, c.alpha, n)));
        } else {
            g.pieces.push_back(constant_piece(c.s_tilde, g.tau0, c.a, n));
            g.pieces.push_back(closed_piece(K::zeta, zeta_profile(g.tau0, c.a, c.alpha, n)));
        }
    }
    return g;
}

double I_functional(std::span<const double> r_grid, std::span<const double> g, int n) {
    require_order(n);
    if (r_grid.size() != g.size() || r_grid.size() < 2) {
        throw std::invalid_argument("I_functional: need matching grid and values, at least 2 nodes");
    }
    if (!strictly_increasing(r_grid) || !(r_grid.front() > 0.0)) {
        throw std::invalid_argument("I_functional: grid must be positive and strictly increasing");
    }
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double dx = std::log(r_grid[i + 1] / r_grid[i]);
        const double res = std::abs(g[i + 1] - g[i]) / dx - 0.5 * n * (g[i] + g[i + 1]);
        acc.add(res * res * dx);
    }
    return acc.value();
}

ConeGrid cone_grid(const ConeConstraint& c, int n, std::size_t nodes) {
    require_order(n);
    c.validate();
    if (nodes < 8) throw std::invalid_argument("cone_grid: need at least 8 nodes");
    std::vector<double> breaks{c.s};
    if (c.s_tilde < 1.0) breaks.push_back(c.s_tilde);
    breaks.push_back(1.0);
    ConeGrid cg;
    cg.r = log_grid_with_breaks(breaks, nodes);
    cg.n = n;
    cg.i_tilde = static_cast<std::size_t>(std::find(cg.r.begin(), cg.r.end(), c.s_tilde) - cg.r.begin());
    if (cg.i_tilde == cg.r.size()) throw std::logic_error("cone_grid: s_tilde missing from grid");
    return cg;
}

double cone_objective(const ConeGrid& grid, std::span<const double> g, std::span<double> grad) {
    const auto& r = grid.r;
    if (g.size() != r.size()) throw std::invalid_argument("cone_objective: size mismatch");
    const bool want_grad = !grad.empty();
    if (want_grad) {
        if (grad.size() != r.size()) throw std::invalid_argument("cone_objective: gradient size mismatch");
        std::fill(grad.begin(), grad.end(), 0.0);
    }
    const double n = grid.n;
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
        const double sigma = i < grid.i_tilde ? -1.0 : 1.0;
        const double dx = std::log(r[i + 1] / r[i]);
        const double res = sigma * (g[i + 1] - g[i]) / dx - 0.5 * n * (g[i] + g[i + 1]);
        acc.add(res * res * dx);
        if (want_grad) {
            grad[i] += 2.0 * res * (-sigma - 0.5 * n * dx);
            grad[i + 1] += 2.0 * res * (sigma - 0.5 * n * dx);
        }
    }
    return acc.value();
}

void project_to_cone(const ConeGrid& grid, const ConeConstraint& c, std::span<double> g) {
    const std::size_t last = g.size() - 1;
    const std::size_t it = grid.i_tilde;
    g[0] = c.b;
    g[it] = c.a;
    g[last] = c.alpha;
    if (it > 1) {
        auto left = g.subspan(1, it - 1);
        isotonic_decreasing(left);
        for (double& v : left) v = std::clamp(v, c.a, c.b);
    }
    if (last > it + 1) {
        auto right = g.subspan(it + 1, last - it - 1);
        isotonic_increasing(right);
        for (double& v : right) v = std::clamp(v, c.a, c.alpha);
    }
}

NumericalProfile minimize_I_numerical(const ConeConstraint& c, int n, std::size_t nodes,
                                      const MinimizerOptions& opt) {
    if (nodes < 64) throw std::invalid_argument("minimize_I_numerical: need at least 64 nodes");
    const ConeGrid grid = cone_grid(c, n, nodes);
    const std::size_t m = grid.r.size();
    const std::size_t it = grid.i_tilde;

    // start from the profile linear in log r on each segment
    std::vector<double> x(m);
    const double ls = std::log(c.s);
    const double lt = std::log(c.s_tilde);
    for (std::size_t i = 0; i < m; ++i) {
        const double lr = std::log(grid.r[i]);
        if (i <= it) {
            x[i] = c.b + (c.a - c.b) * (lr - ls) / (lt - ls);
        } else {
            x[i] = c.a + (c.alpha - c.a) * (lr - lt) / (0.0 - lt);
        }
    }
    project_to_cone(grid, c, x);

    std::vector<double> y = x, x_prev = x, z(m), gy(m);
    double fx = cone_objective(grid, x, {});
    double L = 1.0;
    double t = 1.0;
    std::size_t quiet = 0;

    NumericalProfile out;
    for (out.iterations = 0; out.iterations < opt.max_iterations;) {
        ++out.iterations;
        const double fy = cone_objective(grid, y, gy);
        double fz = 0.0;
        for (;;) {
            for (std::size_t i = 0; i < m; ++i) z[i] = y[i] - gy[i] / L;
            project_to_cone(grid, c, z);
            fz = cone_objective(grid, z, {});
            double lin = 0.0, quad = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double d = z[i] - y[i];
                lin += gy[i] * d;
                quad += d * d;
            }
            if (fz <= fy + lin + 0.5 * L * quad + 1e-15 * std::abs(fy)) break;
            L *= 2.0;
        }

        if (fz > fx) {
            // momentum overshoot: restart from the last iterate
            t = 1.0;
            y = x;
            quiet = 0;
            continue;
        }
        const double rel = (fx - fz) / std::max(std::abs(fz), std::numeric_limits<double>::min());
        out.last_relative_decrease = rel;
        quiet = rel < opt.relative_tol ? quiet + 1 : 0;

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        x_prev.swap(x);
        x = z;
        for (std::size_t i = 0; i < m; ++i) y[i] = x[i] + beta * (x[i] - x_prev[i]);
        t = t_next;
        fx = fz;
        if (quiet >= opt.patience) {
            out.converged = true;
            break;
        }
    }
    out.r = grid.r;
    out.g = x;
    out.objective = fx;
    return out;
}

GapBound gap_lower_bound(const ConeConstraint& c, int n) {
    require_order(n);
    c.validate();
    GapBound gb;
    gb.t0 = compute_t0(c.s, c.a, c.b, n);
    gb.tau0 = compute_tau0(c.a, c.alpha, n);
    gb.ratio = gb.t0 / gb.tau0;
    gb.ratio_bound = (c.s / c.a) * std::pow(4.0 * c.b * c.alpha * std::pow(c.a, n - 2), 1.0 / n);
    if (gb.t0 >= gb.tau0) {
        gb.vacuous = true;
        gb.value = 0.0;
    } else {
        gb.value = pi * n * n * c.a * c.a * std::log(gb.tau0 / gb.t0);
    }
    return gb;
}

}  // namespace relaxlab
