#pragma once

#include <cstddef>
#include <vector>

namespace relaxlab {

struct AssignmentResult {
    std::vector<std::size_t> row_to_col;
    double cost = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
/// potentials, O(k^3)). cost[i][j] is the price of assigning row i to column j.
AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace relaxlab
