#include "relaxlab/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <vector>

namespace relaxlab {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

struct Pair {
    std::vector<double> s, y;
    double rho;
};

}  // namespace

LbfgsReport minimize_lbfgs(const Objective& f, std::span<double> x, const LbfgsOptions& opt,
                           std::span<const double> inv_diag) {
    const std::size_t n = x.size();
    const bool precond = inv_diag.size() == n;
    std::vector<double> g(n), g_new(n), d(n), x_new(n), q(n);
    std::deque<Pair> mem;

    LbfgsReport rep;
    double fx = f(x, g);
    for (; rep.iterations < opt.max_iterations; ++rep.iterations) {
        rep.gradient_norm = max_abs(g);
        if (rep.gradient_norm <= opt.gradient_tol) {
            rep.converged = true;
            break;
        }

        // two-loop recursion
        q = g;
        std::vector<double> alpha(mem.size());
        for (std::size_t i = mem.size(); i-- > 0;) {
            alpha[i] = mem[i].rho * dot(mem[i].s, q);
            for (std::size_t j = 0; j < n; ++j) q[j] -= alpha[i] * mem[i].y[j];
        }
        double gamma = 1.0;
        if (!mem.empty()) {
            const auto& last = mem.back();
            double yDy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                yDy += last.y[j] * last.y[j] * (precond ? inv_diag[j] : 1.0);
            }
            gamma = dot(last.s, last.y) / yDy;
        } else if (!precond) {
            gamma = 1.0 / std::max(1.0, max_abs(g));
        }
        for (std::size_t j = 0; j < n; ++j) q[j] *= gamma * (precond ? inv_diag[j] : 1.0);
        for (std::size_t i = 0; i < mem.size(); ++i) {
            const double beta = mem[i].rho * dot(mem[i].y, q);
            for (std::size_t j = 0; j < n; ++j) q[j] += mem[i].s[j] * (alpha[i] - beta);
        }
        for (std::size_t j = 0; j < n; ++j) d[j] = -q[j];

        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            // not a descent direction: restart from steepest descent
            mem.clear();
            for (std::size_t j = 0; j < n; ++j) d[j] = -g[j] * (precond ? inv_diag[j] : 1.0);
            slope = dot(g, d);
        }

        double t = 1.0;
        double f_new = fx;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t j = 0; j < n; ++j) x_new[j] = x[j] + t * d[j];
            f_new = f(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= fx + opt.armijo * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            if (mem.empty()) break;  // even steepest descent made no progress
            mem.clear();
            continue;
        }

        Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            p.s[j] = x_new[j] - x[j];
            p.y[j] = g_new[j] - g[j];
        }
        const double sy = dot(p.s, p.y);
        if (sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y))) {
            p.rho = 1.0 / sy;
            mem.push_back(std::move(p));
            if (mem.size() > opt.memory) mem.pop_front();
        }
        std::copy(x_new.begin(), x_new.end(), x.begin());
        g.swap(g_new);
        fx = f_new;
    }
    rep.objective = fx;
    rep.gradient_norm = max_abs(g);
    if (rep.gradient_norm <= opt.gradient_tol) rep.converged = true;
    return rep;
}

}  // namespace relaxlab
