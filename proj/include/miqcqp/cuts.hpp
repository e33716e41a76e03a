#pragma once

#include "miqcqp/cut.hpp"
#include "miqcqp/lifted.hpp"

#include <cstdint>
#include <vector>

namespace miqcqp {

/// -a^T X a + (2b + 1) a^T x - b(b + 1). Positive means (X, x) violates the lifted cut.
double violation(const Cut& cut, const Eigen::MatrixXd& X, const Eigen::VectorXd& x);

/// floor(a^T x): maximizes violation over integer b.
long long best_b(const IntVector& a, const Eigen::VectorXd& x);

/// X - x x^T restricted to the leading p coordinates.
Eigen::MatrixXd slack_matrix(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p);

/// Canonicalizes, drops duplicates and cuts with violation <= eps, sorts by
/// violation (descending, then lexicographic) and truncates to cap (cap < 0: no cap).
std::vector<Cut> rank_cuts(std::vector<Cut> cuts, const Eigen::MatrixXd& X, const Eigen::VectorXd& x, double eps,
                           int cap);

/// Every a with at most k nonzero entries in {+1, -1} on coordinates 0..p-1,
/// paired with best_b, filtered and ranked as in rank_cuts.
std::vector<Cut> enumerate_cuts(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p, int k, double eps,
                                int cap);

struct EigCutOptions {
    /// Multipliers of 1 / max|v_i| used for the rounding candidates round(t v).
    std::vector<double> scalings{1.0, 2.0, 3.0};
    /// Sign patterns of the 1..k_round largest-magnitude entries of v.
    int k_round = 3;
    double eps = 1e-6;
};

struct EigCutResult {
    /// lambda_min(M) >= 1/4: no cut of the lattice family can be violated.
    bool no_cut_certified = false;
    double lambda_min = 0.0;
    std::vector<Cut> cuts;
};

/// Candidates from the eigenvector(s) of the smallest eigenvalue of X - x x^T.
EigCutResult eig_cut(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p, const EigCutOptions& options = {});

/// count random a with exactly nnz entries in {+1, -1} on coordinates 0..p-1.
std::vector<Cut> random_cuts(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p, int count, int nnz,
                             double eps, std::uint64_t seed);

/// ||x - 1/2||^2 >= n/4 lifted: -Tr(X) + 1^T x <= 0. Requires p = n.
LiftedConstraint sphere_cut_lifted(int n, int p, int id = 0);

}  // namespace miqcqp
