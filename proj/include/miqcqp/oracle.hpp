#pragma once

#include "miqcqp/cut.hpp"
#include "miqcqp/model.hpp"

#include <vector>

namespace miqcqp {

/// Inclusive integer bounds lo_i <= x_i <= hi_i.
struct IntBox {
    IntVector lo;
    IntVector hi;

    /// Number of lattice points, saturating at max double precision.
    double volume() const;
};

struct BruteForceResult {
    double f_star = 0.0;  // +inf when no box point is feasible
    std::vector<IntVector> argmins;
};

inline constexpr double kMaxBruteForcePoints = 1e7;

/// Exhaustive minimization over the box. Points within feas_tol of every
/// constraint count as feasible; values within tie_tol (relative) of the best are
/// reported as co-optimal. Requires p = n.
BruteForceResult brute_force(const QcqpProblem& problem, const IntBox& box, double feas_tol = 1e-9,
                             double tie_tol = 1e-9);

struct MaxCutOracleResult {
    double value = 0.0;
    /// 0-1 side assignment with z_0 = 1.
    Eigen::VectorXd z;
};

/// Exact max-cut by Gray-code enumeration of 2^(n-1) assignments. n <= 22.
MaxCutOracleResult brute_force_maxcut(const Eigen::MatrixXd& W);

/// A box around x_cts containing every ILS minimizer. With U = f(round(x_cts))
/// and P = A^T A, coordinate i spans |x_i - x_cts_i| <= sqrt(U (P^-1)_ii) + 1,
/// which is at most sqrt(U) / sigma_min(A) + 1.
IntBox ils_box(const Eigen::MatrixXd& A, const Eigen::VectorXd& x_cts);

/// The same box derived from a convex unconstrained objective alone:
/// x_cts minimizes f_0 and U is replaced by f_0(round(x_cts)) - f_0(x_cts).
IntBox ils_box(const QcqpProblem& problem);

/// Box with the same radius on every coordinate.
IntBox uniform_box(int n, long long radius);

}  // namespace miqcqp
