#include "relaxlab/linear_assignment.hpp"

#include <limits>
#include <stdexcept>

namespace relaxlab {

AssignmentResult solve_assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t k = cost.size();
    for (const auto& row : cost) {
        if (row.size() != k) throw std::invalid_argument("solve_assignment: matrix must be square");
    }
    AssignmentResult res;
    if (k == 0) return res;

    const double inf = std::numeric_limits<double>::infinity();
    // 1-based arrays; column 0 is the virtual start column
    std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
    std::vector<std::size_t> match(k + 1, 0), way(k + 1, 0);

    for (std::size_t i = 1; i <= k; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(k + 1, inf);
        std::vector<char> used(k + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= k; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= k; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    res.row_to_col.assign(k, 0);
    for (std::size_t j = 1; j <= k; ++j) res.row_to_col[match[j] - 1] = j - 1;
    for (std::size_t i = 0; i < k; ++i) res.cost += cost[i][res.row_to_col[i]];
    return res;
}

}  // namespace relaxlab
