#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace relaxlab {

/// Returns f(x) and writes grad f(x) into the second argument.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

struct LbfgsOptions {
    std::size_t memory = 8;
    std::size_t max_iterations = 20000;
    double gradient_tol = 1e-8;  // on max |grad_i|
    double armijo = 1e-4;
};

struct LbfgsReport {
    std::size_t iterations = 0;
    double objective = 0.0;
    double gradient_norm = 0.0;  // max |grad_i| at exit
    bool converged = false;
};

/// Limited-memory BFGS with Armijo backtracking. `inv_diag`, when given, scales the
/// initial inverse Hessian (a diagonal preconditioner).
LbfgsReport minimize_lbfgs(const Objective& f, std::span<double> x, const LbfgsOptions& opt,
                           std::span<const double> inv_diag = {});

}  // namespace relaxlab
