#pragma once

// The one-dimensional problem behind the slice estimate:
//
//   I(g) = int_s^1 (|g'| - n g / r)^2 r dr
//
// minimised over profiles g with g(s) = b, g(s~) = a, g(1) = alpha, nonincreasing on
// [s, s~] and nondecreasing on [s~, 1]. In x = log r the integrand is (|g_x| - n g)^2 dx.

#include <cstddef>
#include <span>
#include <vector>

namespace relaxlab {

/// c_plus r^n + c_minus r^-n on [r_a, r_b].
struct ClosedFormProfile {
    double c_plus = 0.0;
    double c_minus = 0.0;
    double r_a = 0.0;
    double r_b = 0.0;
    int n = 1;

    double value(double r) const;
    double derivative(double r) const;
    double second_derivative(double r) const;
    /// -(r g')' + (n^2 / r) g, identically zero for this family.
    double euler_lagrange_residual(double r) const;
};

/// The solution through (s, b) and (t, a).
ClosedFormProfile eta_profile(double t, double s, double a, double b, int n);
/// The root t0 > s at which eta_t0 has zero slope at its right end.
double compute_t0(double s, double a, double b, int n);
/// The solution through (tau, a) and (1, alpha).
ClosedFormProfile zeta_profile(double tau, double a, double alpha, int n);
/// The root tau0 <= 1 at which zeta_tau0 has zero slope at its left end.
double compute_tau0(double a, double alpha, int n);

struct ConeConstraint {
    double s = 0.0;
    double s_tilde = 1.0;
    double a = 0.0;
    double alpha = 0.25;
    double b = 0.5;

    /// Throws std::invalid_argument unless 0 < s < s~ <= 1, 0 < a <= alpha <= 1/4,
    /// alpha <= b, and (s~ = 1 implies a = alpha).
    void validate() const;
};

struct ProfilePiece {
    enum class Kind { eta, constant, zeta };
    Kind kind = Kind::constant;
    double r_lo = 0.0;
    double r_hi = 0.0;
    ClosedFormProfile closed;  // unused for constant pieces
    double level = 0.0;        // constant pieces only

    double value(double r) const;
    double derivative(double r) const;
    /// Exact contribution of this piece to I.
    double I_contribution() const;
};

/// The minimiser of I over the cone, assembled from closed-form pieces.
struct G0Profile {
    ConeConstraint cone;
    int n = 2;
    double t0 = 0.0;
    double tau0 = 1.0;
    std::vector<ProfilePiece> pieces;

    double value(double r) const;
    double derivative(double r) const;
    double I_closed() const;
    std::vector<double> sample(std::span<const double> r_grid) const;
};

G0Profile g0_construct(const ConeConstraint& c, int n);

/// Discrete I with |g_x| by one-sided cell differences and midpoint values, in log r.
double I_functional(std::span<const double> r_grid, std::span<const double> g, int n);

/// Log-spaced grid on [s, 1] with s~ as a node.
struct ConeGrid {
    std::vector<double> r;
    std::size_t i_tilde = 0;  // index of s~
    int n = 2;
};

ConeGrid cone_grid(const ConeConstraint& c, int n, std::size_t nodes);

/// Discrete I with the sign of g_x fixed by the cone (minus on [s, s~], plus after);
/// equals I_functional on cone-feasible g. Writes the gradient when grad is non-empty.
double cone_objective(const ConeGrid& grid, std::span<const double> g, std::span<double> grad);

/// Euclidean projection onto the discrete cone (pinned ends, monotone segments).
void project_to_cone(const ConeGrid& grid, const ConeConstraint& c, std::span<double> g);

struct MinimizerOptions {
    std::size_t max_iterations = 100000;
    double relative_tol = 1e-10;
    std::size_t patience = 25;
};

struct NumericalProfile {
    std::vector<double> r;
    std::vector<double> g;
    double objective = 0.0;
    std::size_t iterations = 0;
    double last_relative_decrease = 0.0;
    bool converged = false;
};

/// Accelerated projected gradient descent with backtracking on the discrete cone.
NumericalProfile minimize_I_numerical(const ConeConstraint& c, int n, std::size_t nodes,
                                      const MinimizerOptions& opt = {});

struct GapBound {
    double value = 0.0;        // pi n^2 a^2 log(tau0 / t0)
    bool vacuous = false;      // t0 >= tau0
    double t0 = 0.0;
    double tau0 = 0.0;
    double ratio = 0.0;        // t0 / tau0
    double ratio_bound = 0.0;  // (s/a) (4 b alpha a^(n-2))^(1/n)
};

GapBound gap_lower_bound(const ConeConstraint& c, int n);

}  // namespace relaxlab
