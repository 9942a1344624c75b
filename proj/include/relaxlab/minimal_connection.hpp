#pragma once

// Minimal connections between signed point singularities.
//
// For charges P_1..P_k (degree +m) and N_1..N_k (degree -m) the minimal connection
// length is min over permutations sigma of sum |P_i - N_sigma(i)|, and the current
// joining them has mass m times that length. Three routes are provided: exhaustive
// permutation search, an O(k^3) assignment solver, and the Kantorovich dual LP
// max sum xi(P_i) - sum xi(N_i) over 1-Lipschitz xi on the charge set.

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "relaxlab/numerics.hpp"

namespace relaxlab {

struct SingularityConfig {
    std::vector<Point3> positives;
    std::vector<Point3> negatives;
    int multiplicity = 1;

    std::size_t size() const { return positives.size(); }
    /// Throws std::invalid_argument on unbalanced charges or multiplicity < 1.
    void validate() const;
};

struct ConnectionResult {
    double length = 0.0;                // geometric minimal-connection length
    double mass = 0.0;                  // multiplicity * length
    std::vector<std::size_t> matching;  // positives[i] is joined to negatives[matching[i]]
};

inline constexpr std::size_t bruteforce_limit = 9;

/// Exhaustive search; ties broken by the lexicographically first permutation. k <= 9.
ConnectionResult min_connection_bruteforce(const SingularityConfig& cfg);
ConnectionResult min_connection_assignment(const SingularityConfig& cfg);
/// Optimal value of the Kantorovich dual (geometric length, not weighted by multiplicity).
double kantorovich_dual(const SingularityConfig& cfg);

/// E + 4 pi * multiplicity * minimal length.
double relaxed_energy(double dirichlet, const SingularityConfig& cfg);

/// {"multiplicity": m, "positives": [[x,y,z],...], "negatives": [[x,y,z],...]}
SingularityConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SingularityConfig& cfg);
nlohmann::json to_json(const ConnectionResult& r);

}  // namespace relaxlab
