#pragma once

#include "miqcqp/lifted.hpp"

#include <optional>
#include <string>
#include <vector>

namespace miqcqp {

struct SolverSettings {
    double rel_gap_tol = 1e-7;
    double feas_tol = 1e-7;
    int max_iters = 200;
    double step_fraction = 0.98;
    /// Tolerance used when certifying per-iterate dual bounds.
    double certify_tol = 1e-6;

    void validate() const;
};

enum class SdpStatus { Optimal, MaxIters, PrimalInfeasible, UnboundedBelow };
std::string to_string(SdpStatus status);

struct SdpSolution {
    Eigen::MatrixXd X;
    Eigen::VectorXd x;
    double f_sdp = 0.0;
    /// One nonnegative multiplier per lifted constraint, same order as LiftedSdp::constraints,
    /// in the unscaled convention of the constraint as given.
    std::vector<double> duals;
    double dual_objective = 0.0;
    SdpStatus status = SdpStatus::MaxIters;
    int iterations = 0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    double rel_gap = 0.0;
    /// Best dual bound that passed certification over all iterates, if any.
    std::optional<double> best_certified_bound;
    /// Certified bound at each iterate (-inf when the iterate did not certify).
    std::vector<double> iterate_bounds;

    double dual(const LiftedSdp& sdp, const Provenance& tag) const;
    bool ok() const { return status == SdpStatus::Optimal; }
};

/// Primal-dual path-following interior-point method on the bordered PSD block
/// [[X, x], [x^T, 1]] with nonnegative slacks for the inequalities.
SdpSolution solve(const LiftedSdp& sdp, const SolverSettings& settings = {});

/// solve() with the constraint F_tag(X, x) <= 0 replaced by F_tag(X, x) <= u.
SdpSolution resolve_perturbed(const LiftedSdp& sdp, const Provenance& tag, double u,
                              const SolverSettings& settings = {});

}  // namespace miqcqp
