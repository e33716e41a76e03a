#pragma once

#include "miqcqp/cut_loop.hpp"
#include "miqcqp/oracle.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace miqcqp {

enum class NodeSelection { BestBound, Dfs };
enum class Branching { DualCut, MostFractional };

struct BncConfig {
    NodeSelection node_selection = NodeSelection::BestBound;
    int max_nodes = 10000;
    int root_cut_rounds = 2;
    int node_cut_rounds = 1;
    double integrality_tol = 1e-6;
    Branching branching = Branching::DualCut;
    std::uint64_t seed = 0;
    CutStrategy cut_strategy = CutStrategy::Combined;
    int random_count = 1000;
    /// Explicit integer bounds; each coordinate gets linear bounds plus the
    /// product constraint (x_i - lo)(x_i - hi) <= 0.
    std::optional<IntBox> box;
    /// Fathom by bound > f* - 1 when f_0 takes integer values on the lattice.
    bool use_integral_objective = true;
    /// Relative slack when comparing node bounds against the incumbent.
    double fathom_tol = 1e-6;
    int threads = 1;
    SolverSettings solver;
    /// Receives one progress line per evaluated node.
    std::function<void(const std::string&)> log;
    /// Sees every node relaxation together with the certificate behind its bound.
    /// Called from worker threads when threads > 1.
    std::function<void(const LiftedSdp&, const SdpSolution&, const DualCertificate&)> on_certificate;

    void validate() const;
};

enum class BncStatus { Optimal, NodeLimit, Infeasible };
std::string to_string(BncStatus status);

struct BncResult {
    BncStatus status = BncStatus::Infeasible;
    std::optional<IntVector> x;
    double f_star = 0.0;  // +inf without an incumbent
    int nodes = 0;
    /// min(f*, bounds of unexplored nodes); certified by dual multipliers.
    double lower_bound = 0.0;
    /// lower_bound and f* after each processed batch.
    std::vector<double> lower_bound_trace;
    std::vector<double> incumbent_trace;
    /// Nodes whose relaxation bound could not be certified and fell back to the parent's.
    int uncertified_nodes = 0;
};

struct BranchChoice {
    IntVector c;
    long long d = 0;
    /// Index of the CUT constraint in the lift that the children drop.
    std::optional<int> removed;
};

/// DUAL_CUT: the CUT constraint with the largest dual above 1e-6 (ties to the
/// lexicographically smallest a) gives (c, d) = (a, b); otherwise, and in
/// MOST_FRACTIONAL mode, the coordinate farthest from an integer with
/// d = floor(x_i). nullopt when x is integral. `admissible` can reject a
/// candidate (c, d), which moves selection on to the next one.
std::optional<BranchChoice> select_branching(
    const SdpSolution& solution, const LiftedSdp& lift, const BncConfig& config,
    const std::function<bool(const IntVector&, long long)>& admissible = {});

struct Incumbent {
    IntVector x;
    double value = 0.0;
};

/// round(x_hat), accepted when it satisfies every constraint of the problem
/// within tol. The value is f_0 at the rounded point.
std::optional<Incumbent> try_incumbent(const SdpSolution& solution, const QcqpProblem& problem, double tol);

/// True when P, q and r are integers, so f_0 is integral on the lattice.
bool objective_is_integral(const QcqpProblem& problem);

/// Branch-and-cut over pure integer problems with SDP node relaxations.
BncResult branch_and_cut(const QcqpProblem& problem, const BncConfig& config = {});

}  // namespace miqcqp
