#pragma once

#include <cstddef>
#include <vector>

namespace relaxlab {

enum class LpStatus { optimal, unbounded, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    double objective = 0.0;
    std::vector<double> x;
    std::size_t pivots = 0;
};

/// maximize c.x subject to A x <= b, x >= 0, with b >= 0 (the origin is feasible).
/// Dense tableau simplex; Dantzig pricing with a switch to Bland's rule after a run
/// of degenerate pivots.
LpResult solve_lp_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                      const std::vector<double>& c, std::size_t max_pivots = 100000);

}  // namespace relaxlab
