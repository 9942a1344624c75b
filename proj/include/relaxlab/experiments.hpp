#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "relaxlab/energy_functionals.hpp"
#include "relaxlab/minimal_connection.hpp"
#include "relaxlab/report_io.hpp"

namespace relaxlab {

/// Runs task(i) for i in [0, count) on up to `workers` threads. Each task writes its own
/// slot, so results come back in index order whatever the scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task);

// ---- T0 energy accounting ------------------------------------------------

struct T0EnergyReport {
    int n = 2;
    double alpha = 0.25;
    double slice_closed = 0.0;   // 4 pi n alpha^2 / (1 + alpha^2)
    double slice_numeric = 0.0;  // dirichlet_energy_radial at z = 0
    EnergyReport energy;         // energy_3d over the cylinder |z| <= 1
    double total_closed = 0.0;   // 2 (slice_closed + 4 pi n)
    double relative_error = 0.0;
};

T0EnergyReport t0_energy(int n, double alpha, std::size_t r_nodes = 4096, std::size_t z_nodes = 17);

// ---- relaxation limit of u_eps -------------------------------------------

struct RelaxationRow {
    double eps = 0.0;
    double slice_energy = 0.0;
    double deficit = 0.0;        // limit - slice_energy
    double exact_deficit = 0.0;  // 8 pi n beta^2 / (1 + beta^2), beta = alpha eps^n
};

struct RelaxationReport {
    int n = 2;
    double alpha = 0.25;
    double limit = 0.0;  // 4 pi n + 4 pi n alpha^2 / (1 + alpha^2)
    std::vector<RelaxationRow> rows;
    double fitted_exponent = 0.0;  // NaN with fewer than two eps < 1
    bool deficits_positive = false;
    bool deficits_monotone = false;  // decreasing as eps decreases
};

RelaxationReport relaxation_check(int n, double alpha, const std::vector<double>& eps,
                                  std::size_t nodes = 32768);

// ---- Proposition sweep ---------------------------------------------------

struct SweepSpec {
    int n = 2;
    std::vector<double> alphas{0.25, 0.1, 0.05, 0.02};
    std::vector<double> a_fractions{1.0, 0.5, 0.1};  // a = alpha * fraction
    std::vector<double> c0s{1.0, 5.0, 20.0};
    double b = 0.5;
    std::size_t nodes = 1024;
    std::size_t workers = 1;
};

struct SweepRow {
    int n = 2;
    double alpha = 0.0, a = 0.0, c0 = 0.0, s = 0.0, s_tilde = 0.0;
    bool feasible = false;
    double t0 = 0.0, tau0 = 0.0;
    double I_closed = 0.0;
    double I_numeric = 0.0;
    double bound = 0.0;         // pi n^2 a^2 log(tau0 / t0)
    double pi_I = 0.0;          // lower bound on E - A over admissible maps
    double gap_g0 = 0.0;        // E - A of the map with chart g0
    double target = 0.0;        // 8 pi n a^2 / (1 + a^2)
    bool fast_path = false;     // bound > target
    bool holds = false;         // fast_path or pi_I > target
    bool holds_g0 = false;      // gap_g0 > target
    bool converged = false;
    std::size_t iterations = 0;
};

struct EscapeRow {
    double alpha = 0.0;
    double lower_bound = 0.0;     // disc part plus the two annulus area bounds
    double construct_energy = 0.0;  // disc bound plus the energy of a profile reaching 1
    double target = 0.0;          // 4 pi n + 4 pi n alpha^2 / (1 + alpha^2)
    bool bound_respected = false; // construct_energy >= lower_bound
    bool exceeds_target = false;  // lower_bound > target
};

struct SweepReport {
    SweepSpec spec;
    std::vector<SweepRow> rows;
    std::vector<EscapeRow> escape;
    double empirical_alpha0 = 0.0;  // 0 when no swept alpha qualifies
    bool all_converged = true;
};

/// s~ candidates for a given s: 2s, (s + 1)/2, and 1 (without repeats).
std::vector<double> s_tilde_choices(double s);

SweepReport proposition_sweep(const SweepSpec& spec);

// ---- dipole trade-off ----------------------------------------------------

struct DipoleSpec {
    int n = 2;
    double alpha = 0.05;
    std::vector<double> deltas{0.05, 0.1, 0.2, 0.35, 0.5};
    std::vector<double> box_factors{1.0, 2.0, 4.0};  // r_box = factor * delta
    std::size_t r_nodes = 48;
    std::size_t z_nodes = 65;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    std::size_t max_iterations = 20000;
    double gradient_tol = 1e-7;
};

struct DipoleRow {
    int n = 2;
    double alpha = 0.0, delta = 0.0, r_box = 0.0;
    double mass_saving = 0.0;  // 4 pi n * 2 delta
    double energy_u0 = 0.0;    // Dirichlet energy of u0 in the box
    double energy_new = 0.0;   // minimised energy with the defect segment removed
    double net = 0.0;          // mass_saving - (energy_new - energy_u0)
    bool converged = false;
    std::size_t iterations = 0;
    double gradient_norm = 0.0;
};

struct DipoleReport {
    DipoleSpec spec;
    std::vector<DipoleRow> rows;
    bool all_converged = true;
    bool any_positive = false;
};

DipoleReport dipole_tradeoff(const DipoleSpec& spec);

// ---- minimal connection --------------------------------------------------

struct SigmaReport {
    ConnectionResult primal;
    double dual = 0.0;
    bool has_bruteforce = false;
    double bruteforce_length = 0.0;
};

SigmaReport sigma_report(const SingularityConfig& cfg);

// ---- tables --------------------------------------------------------------

Table to_table(const T0EnergyReport& r);
Table to_table(const RelaxationReport& r);
Table to_table(const SweepReport& r);
Table escape_table(const SweepReport& r);
Table to_table(const DipoleReport& r);
nlohmann::json to_json(const SigmaReport& r);

}  // namespace relaxlab
