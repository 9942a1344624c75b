#include "relaxlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include "relaxlab/lbfgs.hpp"
#include "relaxlab/meridian_field.hpp"
#include "relaxlab/profile_variational.hpp"

namespace relaxlab {

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    task(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

namespace {

void require_n(int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
}

void require_alpha(double alpha) {
    if (!(alpha > 0.0) || alpha > 0.25) throw std::invalid_argument("alpha must lie in (0, 1/4]");
}

double cap(double f) { return f * f / (1.0 + f * f); }

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

}  // namespace

// ---- T0 -------------------------------------------------------------------

T0EnergyReport t0_energy(int n, double alpha, std::size_t r_nodes, std::size_t z_nodes) {
    require_n(n);
    if (alpha < 0.0 || alpha > 0.25) throw std::invalid_argument("alpha must lie in [0, 1/4]");
    if (z_nodes < 3) throw std::invalid_argument("t0_energy: need at least 3 z-nodes");
    T0EnergyReport rep;
    rep.n = n;
    rep.alpha = alpha;
    const auto r = log_grid(1e-5, 1.0, r_nodes);
    const auto z = uniform_grid(-1.0, 1.0, z_nodes);
    const MeridianField field = extrude_profile(u0_profile(alpha, n, r), z, {{-1.0, 1.0}});
    rep.slice_closed = conformal_slice_energy(alpha, n);
    rep.slice_numeric = dirichlet_energy_radial(field.slice(z_nodes / 2));
    rep.energy = energy_3d(field);
    rep.total_closed = 2.0 * (rep.slice_closed + 4.0 * pi * n);
    rep.relative_error = std::abs(rep.energy.total - rep.total_closed) / rep.total_closed;
    return rep;
}

// ---- relaxation -------------------------------------------------------------

RelaxationReport relaxation_check(int n, double alpha, const std::vector<double>& eps,
                                  std::size_t nodes) {
    require_n(n);
    require_alpha(alpha);
    if (eps.empty()) throw std::invalid_argument("relaxation_check: empty eps list");
    RelaxationReport rep;
    rep.n = n;
    rep.alpha = alpha;
    rep.limit = 4.0 * pi * n + conformal_slice_energy(alpha, n);

    for (double e : eps) {
        if (!(e > 0.0) || e > 1.0) throw std::invalid_argument("relaxation_check: eps must lie in (0, 1]");
        // resolve the inner branch down to far below the radius where its chart equals 1
        const double core = std::pow(alpha, 1.0 / n) * e * e;
        std::vector<double> breaks{1e-6 * core};
        if (e < 1.0) breaks.push_back(e);
        breaks.push_back(1.0);
        const auto grid = log_grid_with_breaks(breaks, nodes);
        RelaxationRow row;
        row.eps = e;
        row.slice_energy = dirichlet_energy_radial(u_eps_profile(alpha, n, e, grid));
        row.deficit = rep.limit - row.slice_energy;
        row.exact_deficit = 8.0 * pi * n * cap(alpha * std::pow(e, n));
        rep.rows.push_back(row);
    }

    std::vector<RelaxationRow> sorted = rep.rows;
    std::sort(sorted.begin(), sorted.end(), [](const auto& p, const auto& q) { return p.eps < q.eps; });
    rep.deficits_positive = std::all_of(sorted.begin(), sorted.end(), [](const auto& r) { return r.deficit > 0.0; });
    rep.deficits_monotone = true;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (!(sorted[i].deficit > sorted[i - 1].deficit)) rep.deficits_monotone = false;
    }
    std::vector<double> xs, ys;
    for (const auto& r : sorted) {
        if (r.eps < 1.0 && r.deficit > 0.0) {
            xs.push_back(r.eps);
            ys.push_back(r.deficit);
        }
    }
    rep.fitted_exponent = xs.size() >= 2 ? loglog_slope(xs, ys) : nan_v;
    return rep;
}

// ---- Proposition sweep ------------------------------------------------------

std::vector<double> s_tilde_choices(double s) {
    std::vector<double> out{2.0 * s, 0.5 * (s + 1.0), 1.0};
    if (out[0] == 1.0) out.erase(out.begin());
    return out;
}

namespace {

double g0_map_gap(const G0Profile& g0, std::size_t nodes) {
    const auto& c = g0.cone;
    std::set<double> pts{c.s, c.s_tilde, 1.0};
    for (double t : {g0.t0, g0.tau0}) {
        if (t > c.s && t < 1.0) pts.insert(t);
    }
    const std::vector<double> breaks(pts.begin(), pts.end());
    const auto grid = log_grid_with_breaks(breaks, nodes);
    const RadialProfile p = profile_from_chart([&](double r) { return g0.value(r); }, g0.n, grid);
    return conformality_gap(p);
}

SweepRow sweep_point(int n, double alpha, double a, double c0, double s_tilde, double b,
                     std::size_t nodes) {
    SweepRow row;
    row.n = n;
    row.alpha = alpha;
    row.a = a;
    row.c0 = c0;
    row.s = c0 * a;
    row.s_tilde = s_tilde;
    row.target = 8.0 * pi * n * cap(a);
    ConeConstraint c{row.s, s_tilde, a, alpha, b};
    try {
        c.validate();
    } catch (const std::invalid_argument&) {
        row.feasible = false;
        row.t0 = row.tau0 = row.I_closed = row.I_numeric = row.bound = row.pi_I = row.gap_g0 = nan_v;
        row.converged = true;
        return row;
    }
    row.feasible = true;
    const G0Profile g0 = g0_construct(c, n);
    const GapBound gb = gap_lower_bound(c, n);
    const NumericalProfile num = minimize_I_numerical(c, n, nodes);
    row.t0 = g0.t0;
    row.tau0 = g0.tau0;
    row.I_closed = g0.I_closed();
    row.I_numeric = num.objective;
    row.bound = gb.value;
    row.pi_I = pi * num.objective;
    row.gap_g0 = g0_map_gap(g0, 4 * nodes);
    row.fast_path = row.bound > row.target;
    row.holds = row.fast_path || row.pi_I > row.target;
    row.holds_g0 = row.gap_g0 > row.target;
    row.converged = num.converged;
    row.iterations = num.iterations;
    return row;
}

EscapeRow escape_point(int n, double alpha, double b) {
    EscapeRow e;
    e.alpha = alpha;
    const double disc = 4.0 * pi * n * (1.0 - cap(b));
    e.lower_bound = disc + (2.0 * pi * n - 4.0 * pi * n * cap(b)) + (2.0 * pi * n - 4.0 * pi * n * cap(alpha));
    e.target = 4.0 * pi * n + 4.0 * pi * n * cap(alpha);

    // chart b at s = 0.1, rising to 1 at r0 = 0.5, falling to alpha at 1 (linear in log r)
    const double s = 0.1, r0 = 0.5;
    const std::vector<double> breaks{s, r0, 1.0};
    const auto grid = log_grid_with_breaks(breaks, 4096);
    auto chart = [&](double r) {
        if (r <= r0) return b + (1.0 - b) * std::log(r / s) / std::log(r0 / s);
        return 1.0 + (alpha - 1.0) * std::log(r / r0) / std::log(1.0 / r0);
    };
    e.construct_energy = disc + dirichlet_energy_radial(profile_from_chart(chart, n, grid));
    e.bound_respected = e.construct_energy >= e.lower_bound - 1e-12 * e.lower_bound;
    e.exceeds_target = e.lower_bound > e.target;
    return e;
}

double empirical_threshold(const std::vector<SweepRow>& rows, std::vector<double> alphas,
                           bool SweepRow::*flag) {
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    double best = 0.0;
    for (double al : alphas) {
        bool all = true;
        for (const auto& r : rows) {
            if (r.alpha == al && r.feasible && !(r.*flag)) all = false;
        }
        if (!all) break;
        best = al;
    }
    return best;
}

}  // namespace

SweepReport proposition_sweep(const SweepSpec& spec) {
    require_n(spec.n);
    if (spec.alphas.empty() || spec.a_fractions.empty() || spec.c0s.empty()) {
        throw std::invalid_argument("proposition_sweep: parameter ranges must be non-empty");
    }
    for (double al : spec.alphas) require_alpha(al);
    for (double f : spec.a_fractions) {
        if (!(f > 0.0) || f > 1.0) throw std::invalid_argument("proposition_sweep: a fractions must lie in (0, 1]");
    }
    for (double c0 : spec.c0s) {
        if (!(c0 > 0.0)) throw std::invalid_argument("proposition_sweep: C0 must be positive");
    }
    if (spec.nodes < 64) throw std::invalid_argument("proposition_sweep: need at least 64 nodes");

    struct Point {
        double alpha, a, c0, s_tilde;
    };
    std::vector<Point> pts;
    for (double al : spec.alphas) {
        for (double f : spec.a_fractions) {
            for (double c0 : spec.c0s) {
                const double a = al * f;
                for (double st : s_tilde_choices(c0 * a)) pts.push_back({al, a, c0, st});
            }
        }
    }

    SweepReport rep;
    rep.spec = spec;
    rep.rows.resize(pts.size());
    parallel_for(pts.size(), spec.workers, [&](std::size_t i) {
        const auto& p = pts[i];
        rep.rows[i] = sweep_point(spec.n, p.alpha, p.a, p.c0, p.s_tilde, spec.b, spec.nodes);
    });
    for (double al : spec.alphas) rep.escape.push_back(escape_point(spec.n, al, spec.b));
    rep.all_converged = std::all_of(rep.rows.begin(), rep.rows.end(), [](const auto& r) { return r.converged; });
    rep.empirical_alpha0 = empirical_threshold(rep.rows, spec.alphas, &SweepRow::holds);
    return rep;
}

// ---- dipole -----------------------------------------------------------------

namespace {

// z-nodes on [-delta, delta], geometric in the distance to the nearer end
std::vector<double> clustered_z(double delta, double d_min, std::size_t nodes) {
    const std::size_t half = (nodes - 1) / 2 + 1;
    const auto d = log_grid(d_min, delta, half);
    std::vector<double> z{-delta};
    for (double v : d) z.push_back(-delta + v);
    z.back() = 0.0;
    for (std::size_t i = d.size() - 1; i-- > 0;) z.push_back(delta - d[i]);
    z.push_back(delta);
    return z;
}

DipoleRow dipole_point(const DipoleSpec& spec, double delta, double r_box, std::uint64_t seed) {
    const int n = spec.n;
    DipoleRow row;
    row.n = n;
    row.alpha = spec.alpha;
    row.delta = delta;
    row.r_box = r_box;
    row.mass_saving = 4.0 * pi * n * 2.0 * delta;

    const double r_min = 1e-3 * delta;
    const auto r = log_grid(r_min, r_box, spec.r_nodes);
    const auto z = clustered_z(delta, r_min, spec.z_nodes);
    const std::size_t nr = r.size(), nz = z.size();

    std::vector<double> phi_old(nr * nz);
    for (std::size_t k = 0; k < nz; ++k) {
        for (std::size_t j = 0; j < nr; ++j) phi_old[k * nr + j] = 2.0 * std::atan(u0_chart(spec.alpha, n, r[j]));
    }
    row.energy_u0 = detail::meridian_energy(r, z, phi_old, n, {});

    // boundary: u0 on the faces and the outer radius, the south pole on the axis in between
    std::vector<double> phi = phi_old;
    for (std::size_t k = 1; k + 1 < nz; ++k) phi[k * nr] = pi;

    std::vector<std::size_t> free_idx;
    for (std::size_t k = 1; k + 1 < nz; ++k) {
        for (std::size_t j = 1; j + 1 < nr; ++j) free_idx.push_back(k * nr + j);
    }

    // start from the anti-conformal slice that wraps the sphere once, plus a seeded kick
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> kick(-1e-2, 1e-2);
    const double lambda = spec.alpha * std::pow(r_box, 2 * n);
    std::vector<double> x(free_idx.size());
    for (std::size_t i = 0; i < free_idx.size(); ++i) {
        const std::size_t j = free_idx[i] % nr;
        x[i] = 2.0 * std::atan(lambda * std::pow(r[j], -n)) + kick(rng);
    }

    // diagonal of the Hessian at small increments
    std::vector<double> wz(nz, 0.0);
    for (std::size_t k = 0; k + 1 < nz; ++k) {
        wz[k] += 0.5 * (z[k + 1] - z[k]);
        wz[k + 1] += 0.5 * (z[k + 1] - z[k]);
    }
    const auto wr = detail::radial_weights(r);
    std::vector<double> inv_diag(free_idx.size());
    for (std::size_t i = 0; i < free_idx.size(); ++i) {
        const std::size_t j = free_idx[i] % nr, k = free_idx[i] / nr;
        double h = 2.0 * pi * wz[k] * (1.0 / std::log(r[j] / r[j - 1]) + 1.0 / std::log(r[j + 1] / r[j]));
        h += 2.0 * pi * wr[j] * (1.0 / (z[k] - z[k - 1]) + 1.0 / (z[k + 1] - z[k]));
        inv_diag[i] = 1.0 / h;
    }

    std::vector<double> full_grad(nr * nz);
    Objective f = [&](std::span<const double> xv, std::span<double> g) {
        for (std::size_t i = 0; i < free_idx.size(); ++i) phi[free_idx[i]] = xv[i];
        const double e = detail::meridian_energy(r, z, phi, n, full_grad);
        for (std::size_t i = 0; i < free_idx.size(); ++i) g[i] = full_grad[free_idx[i]];
        return e;
    };
    LbfgsOptions opt;
    opt.max_iterations = spec.max_iterations;
    opt.gradient_tol = spec.gradient_tol;
    const LbfgsReport lr = minimize_lbfgs(f, x, opt, inv_diag);

    row.energy_new = lr.objective;
    row.net = row.mass_saving - (row.energy_new - row.energy_u0);
    row.converged = lr.converged;
    row.iterations = lr.iterations;
    row.gradient_norm = lr.gradient_norm;
    return row;
}

}  // namespace

DipoleReport dipole_tradeoff(const DipoleSpec& spec) {
    require_n(spec.n);
    require_alpha(spec.alpha);
    if (spec.deltas.empty() || spec.box_factors.empty()) {
        throw std::invalid_argument("dipole_tradeoff: parameter ranges must be non-empty");
    }
    for (double d : spec.deltas) {
        if (!(d > 0.0) || d > 0.5) throw std::invalid_argument("dipole_tradeoff: delta must lie in (0, 0.5]");
    }
    for (double b : spec.box_factors) {
        if (!(b > 0.0)) throw std::invalid_argument("dipole_tradeoff: box factors must be positive");
    }
    if (spec.r_nodes < 8 || spec.z_nodes < 9) throw std::invalid_argument("dipole_tradeoff: grid too small");

    DipoleReport rep;
    rep.spec = spec;
    const std::size_t nb = spec.box_factors.size();
    rep.rows.resize(spec.deltas.size() * nb);
    parallel_for(rep.rows.size(), spec.workers, [&](std::size_t i) {
        const double delta = spec.deltas[i / nb];
        rep.rows[i] = dipole_point(spec, delta, spec.box_factors[i % nb] * delta, spec.seed + i);
    });
    for (const auto& r : rep.rows) {
        rep.all_converged = rep.all_converged && r.converged;
        rep.any_positive = rep.any_positive || r.net > 0.0;
    }
    return rep;
}

// ---- sigma ------------------------------------------------------------------

SigmaReport sigma_report(const SingularityConfig& cfg) {
    SigmaReport rep;
    rep.primal = min_connection_assignment(cfg);
    rep.dual = kantorovich_dual(cfg);
    if (cfg.size() <= bruteforce_limit) {
        rep.has_bruteforce = true;
        rep.bruteforce_length = min_connection_bruteforce(cfg).length;
    }
    return rep;
}

// ---- tables -----------------------------------------------------------------

namespace {

Cell cnt(std::size_t v) { return static_cast<std::int64_t>(v); }
Cell num(int v) { return static_cast<std::int64_t>(v); }

}  // namespace

Table to_table(const T0EnergyReport& r) {
    Table t;
    t.columns = {"n", "alpha", "slice_closed", "slice_numeric", "E", "A", "gap",
                 "mass_term", "total", "total_closed", "relative_error"};
    t.add_row({num(r.n), r.alpha, r.slice_closed, r.slice_numeric, r.energy.E, r.energy.A, r.energy.gap,
               r.energy.mass_term, r.energy.total, r.total_closed, r.relative_error});
    return t;
}

Table to_table(const RelaxationReport& r) {
    Table t;
    t.columns = {"n", "alpha", "eps", "slice_energy", "limit", "deficit", "exact_deficit"};
    for (const auto& row : r.rows) {
        t.add_row({num(r.n), r.alpha, row.eps, row.slice_energy, r.limit, row.deficit, row.exact_deficit});
    }
    t.meta = {{"fitted_exponent", std::isfinite(r.fitted_exponent) ? nlohmann::json(r.fitted_exponent)
                                                                   : nlohmann::json(nullptr)},
              {"expected_exponent", 2 * r.n},
              {"deficits_positive", r.deficits_positive},
              {"deficits_monotone", r.deficits_monotone}};
    return t;
}

Table to_table(const SweepReport& r) {
    Table t;
    t.columns = {"n", "alpha", "a", "s", "s_tilde", "t0", "tau0", "I_closed", "I_numeric", "bound",
                 "c0", "feasible", "pi_I", "gap_g0", "target", "fast_path", "holds", "holds_g0",
                 "converged", "iterations"};
    for (const auto& w : r.rows) {
        t.add_row({num(w.n), w.alpha, w.a, w.s, w.s_tilde, w.t0, w.tau0, w.I_closed, w.I_numeric, w.bound,
                   w.c0, w.feasible, w.pi_I, w.gap_g0, w.target, w.fast_path, w.holds, w.holds_g0,
                   w.converged, cnt(w.iterations)});
    }
    t.meta = {{"empirical_alpha0", r.empirical_alpha0},
              {"all_converged", r.all_converged},
              {"b", r.spec.b},
              {"note", "numerical evidence only; alpha0 is the largest swept alpha at which every "
                       "feasible point (and every smaller swept alpha) satisfies the inequality"}};
    return t;
}

Table escape_table(const SweepReport& r) {
    Table t;
    t.columns = {"n", "alpha", "lower_bound", "construct_energy", "target", "bound_respected", "exceeds_target"};
    for (const auto& e : r.escape) {
        t.add_row({num(r.spec.n), e.alpha, e.lower_bound, e.construct_energy, e.target, e.bound_respected,
                   e.exceeds_target});
    }
    return t;
}

Table to_table(const DipoleReport& r) {
    Table t;
    t.columns = {"n", "alpha", "delta", "r_box", "mass_saving", "energy_u0", "energy_new", "net",
                 "converged", "iterations", "gradient_norm"};
    for (const auto& w : r.rows) {
        t.add_row({num(w.n), w.alpha, w.delta, w.r_box, w.mass_saving, w.energy_u0, w.energy_new, w.net,
                   w.converged, cnt(w.iterations), w.gradient_norm});
    }
    t.meta = {{"all_converged", r.all_converged},
              {"any_positive_net", r.any_positive},
              {"seed", r.spec.seed},
              {"note", "exploratory evidence from a discretised minimisation, not a proof"}};
    return t;
}

nlohmann::json to_json(const SigmaReport& r) {
    nlohmann::json j = to_json(r.primal);
    j["primal"] = r.primal.length;
    j["dual"] = r.dual;
    if (r.has_bruteforce) j["bruteforce"] = r.bruteforce_length;
    return j;
}

}  // namespace relaxlab
