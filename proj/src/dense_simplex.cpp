#include "relaxlab/dense_simplex.hpp"

#include <limits>
#include <stdexcept>

namespace relaxlab {

LpResult solve_lp_max(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                      const std::vector<double>& c, std::size_t max_pivots) {
    const std::size_t m = A.size();
    const std::size_t nv = c.size();
    if (b.size() != m) throw std::invalid_argument("solve_lp_max: b size mismatch");
    for (std::size_t i = 0; i < m; ++i) {
        if (A[i].size() != nv) throw std::invalid_argument("solve_lp_max: A row size mismatch");
        if (b[i] < 0.0) throw std::invalid_argument("solve_lp_max: b must be nonnegative");
    }

    const std::size_t cols = nv + m + 1;  // structural, slack, rhs
    const std::size_t rhs = cols - 1;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < nv; ++j) t[i][j] = A[i][j];
        t[i][nv + i] = 1.0;
        t[i][rhs] = b[i];
        basis[i] = nv + i;
    }
    for (std::size_t j = 0; j < nv; ++j) t[m][j] = -c[j];

    constexpr double eps = 1e-12;
    constexpr std::size_t degenerate_limit = 50;
    std::size_t degenerate_run = 0;

    LpResult res;
    for (;;) {
        const bool bland = degenerate_run >= degenerate_limit;
        std::size_t enter = cols;
        double best = -eps;
        for (std::size_t j = 0; j < rhs; ++j) {
            if (t[m][j] < best) {
                enter = j;
                if (bland) break;
                best = t[m][j];
            }
        }
        if (enter == cols) {
            res.status = LpStatus::optimal;
            break;
        }
        if (res.pivots >= max_pivots) {
            res.status = LpStatus::iteration_limit;
            break;
        }

        std::size_t leave = m;
        double ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter] <= eps) continue;
            const double q = t[i][rhs] / t[i][enter];
            if (q < ratio - eps || (q <= ratio + eps && leave < m && basis[i] < basis[leave])) {
                ratio = q;
                leave = i;
            }
        }
        if (leave == m) {
            res.status = LpStatus::unbounded;
            break;
        }
        degenerate_run = (ratio <= eps) ? degenerate_run + 1 : 0;

        const double piv = t[leave][enter];
        for (double& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = t[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
        ++res.pivots;
    }

    res.x.assign(nv, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < nv) res.x[basis[i]] = t[i][rhs];
    }
    res.objective = t[m][rhs];
    return res;
}

}  // namespace relaxlab
