#pragma once

#include "miqcqp/cut.hpp"
#include "miqcqp/model.hpp"
#include "miqcqp/sdp_solver.hpp"

#include <cstdint>

namespace miqcqp {

struct IlsRounding {
    IntVector x;
    double value = 0.0;
};

/// Upper bound for unconstrained integer minimization. Sample k draws
/// x_hat + F g with F F^T = psd_project(X_hat - x_hat x_hat^T) and g ~ N(0, I)
/// from Rng(derive_seed(seed, k)), rounds it, then runs greedy coordinate
/// descent. round(x_hat) is polished as an extra candidate. The result is
/// independent of the thread count.
IlsRounding ils_round(const SdpSolution& solution, const QcqpProblem& problem, int samples, std::uint64_t seed,
                      int threads = 1);

/// Greedy single-coordinate descent on an integer point: repeatedly applies the
/// best integer step along one coordinate until no step improves.
IntVector polish_integer(const QuadraticForm& objective, IntVector x);

struct MaxCutRounding {
    /// 0-1 side assignment.
    Eigen::VectorXd z;
    double value = 0.0;
};

/// Hyperplane rounding on the +-1 moment matrix Y = 4X - 2 x 1^T - 2 1 x^T + 1 1^T
/// of the 0-1 lift, followed by single-vertex flips while the cut improves.
MaxCutRounding maxcut_round(const SdpSolution& solution, const Eigen::MatrixXd& W, int samples,
                            std::uint64_t seed, int threads = 1);

/// The +-1 moment matrix built from a 0-1 lifted point.
Eigen::MatrixXd sign_moment_matrix(const Eigen::MatrixXd& X, const Eigen::VectorXd& x);

}  // namespace miqcqp
