#pragma once

#include "miqcqp/certificate.hpp"
#include "miqcqp/cuts.hpp"
#include "miqcqp/sdp_solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace miqcqp {

enum class CutStrategy { EnumK1, EnumK2, EnumK3, Eig, Random3, Combined };

/// "enum1", "enum2", "enum3", "eig", "random3", "combined".
std::string to_string(CutStrategy strategy);
std::optional<CutStrategy> parse_strategy(const std::string& name);

struct CutLoopConfig {
    CutStrategy strategy = CutStrategy::Combined;
    int max_rounds = 10;
    /// Cuts added per round; negative means 4n.
    int cap = -1;
    double eps = 1e-6;
    std::uint64_t seed = 0;
    /// Samples drawn by the RANDOM3 family each round.
    int random_count = 10000;
    EigCutOptions eig;
    /// Start from the fixed cuts x_i (x_i - 1) >= 0 instead of an empty pool.
    bool baseline_k1_fixed = false;
    SolverSettings solver;

    void validate() const;
};

struct RoundRecord {
    int round = 0;
    double f_sdp = 0.0;
    std::optional<double> certified_bound;
    /// Multipliers behind certified_bound, over the first lambda.size() constraints of the final lift.
    std::optional<DualCertificate> certificate;
    int cuts_added = 0;
    int cuts_total = 0;
    int iterations = 0;
    double wall_ms = 0.0;
    SdpStatus status = SdpStatus::Optimal;
};

enum class StopReason { NoNewCuts, MaxRounds, NoCutCertified, SolverFailure };
std::string to_string(StopReason reason);

struct TightenReport {
    /// Round 0 is the solve over the initial pool.
    std::vector<RoundRecord> rounds;
    SdpSolution solution;
    LiftedSdp lift;
    std::vector<Cut> cuts;
    std::optional<DualCertificate> certificate;
    std::optional<double> certified_bound;
    StopReason stop = StopReason::NoNewCuts;

    SdpStatus status() const { return solution.status; }
};

/// The cuts (e_i, 0), i < p, i.e. x_i (x_i - 1) >= 0.
std::vector<Cut> baseline_k1_cuts(int n, int p);

struct CutBatch {
    std::vector<Cut> cuts;
    bool no_cut_certified = false;
    double lambda_min = 0.0;
};

/// Violated cuts of one strategy at (X, x), ranked but not capped. The
/// lambda_min >= 1/4 certificate is checked for every strategy.
CutBatch generate_cuts(CutStrategy strategy, const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p,
                       const CutLoopConfig& config, int round);

/// Certificate and bound from a solve, or nullopt when the duals do not certify.
std::optional<DualCertificate> certify(const SdpSolution& solution, const LiftedSdp& lift, double tol = 1e-6);

/// Solve, add violated cuts, re-solve, until a round finds nothing new,
/// the eigenvalue certificate fires, or max_rounds cut rounds have run.
TightenReport tighten(const QcqpProblem& problem, const CutLoopConfig& config);

}  // namespace miqcqp
