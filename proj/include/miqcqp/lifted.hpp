#pragma once

#include "miqcqp/cut.hpp"
#include "miqcqp/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace miqcqp {

/// Where a lifted constraint came from. Branch and cut-pool bookkeeping
/// locate constraints through these tags.
struct Provenance {
    enum class Kind { Original, Cut, Branch, Extra };
    Kind kind = Kind::Original;
    int id = 0;

    static Provenance original(int i) { return {Kind::Original, i}; }
    static Provenance cut(int i) { return {Kind::Cut, i}; }
    static Provenance branch(int i) { return {Kind::Branch, i}; }
    static Provenance extra(int i) { return {Kind::Extra, i}; }

    friend bool operator==(const Provenance&, const Provenance&) = default;
    std::string str() const;
};

/// Tr(P X) + q^T x + r <= 0.
struct LiftedConstraint {
    Eigen::MatrixXd P;
    Eigen::VectorXd q;
    double r = 0.0;
    Provenance tag;
    std::optional<Cut> cut;  // set for CUT constraints
};

/// minimize Tr(P0 X) + q0^T x + r0 subject to the listed constraints and
/// [[X, x], [x^T, 1]] PSD.
struct LiftedSdp {
    int n = 0;
    Eigen::MatrixXd P0;
    Eigen::VectorXd q0;
    double r0 = 0.0;
    std::vector<LiftedConstraint> constraints;

    /// Throws if a tag is repeated or a matrix is not symmetric / sized n.
    void validate() const;
    /// Index into constraints, or -1.
    int find(const Provenance& tag) const;
    void add(LiftedConstraint c);
};

double lifted_value(const LiftedConstraint& c, const Eigen::MatrixXd& X, const Eigen::VectorXd& x);
double lifted_objective(const LiftedSdp& sdp, const Eigen::MatrixXd& X, const Eigen::VectorXd& x);

LiftedConstraint lift_cut(const Cut& cut, int id);

/// ORIGINAL(i) for the i-th inequality, CUT(k) for the k-th cut. Integrality is dropped.
LiftedSdp lift(const QcqpProblem& problem, const std::vector<Cut>& cuts = {});

/// Linear c^T x <= d (side = 0) or c^T x >= d + 1 (side = 1), tagged BRANCH(id).
LiftedConstraint lift_branch(const IntVector& c, long long d, int side, int id);

}  // namespace miqcqp
