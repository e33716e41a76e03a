#pragma once

#include "miqcqp/linalg.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace miqcqp {

/// x^T P x + q^T x + r with P stored symmetrized.
struct QuadraticForm {
    Eigen::MatrixXd P;
    Eigen::VectorXd q;
    double r = 0.0;

    QuadraticForm() = default;
    QuadraticForm(const Eigen::MatrixXd& P, const Eigen::VectorXd& q, double r);

    static QuadraticForm zero(Eigen::Index n);
    Eigen::Index dim() const { return q.size(); }

    QuadraticForm operator-() const;
};

template <typename Derived>
double evaluate(const QuadraticForm& f, const Eigen::MatrixBase<Derived>& x) {
    if (x.size() != f.dim())
        throw Error("evaluate: dimension mismatch (form " + std::to_string(f.dim()) + ", point " +
                    std::to_string(x.size()) + ")");
    const Eigen::VectorXd xd = x.template cast<double>();
    return xd.dot(f.P * xd) + f.q.dot(xd) + f.r;
}

enum class Sense { Leq, Eq };

struct Constraint {
    QuadraticForm form;
    Sense sense = Sense::Leq;
};

/// minimize f_0(x) subject to f_i(x) <= 0 (or = 0), x_1..x_p integer.
/// Integer variables are always the leading p coordinates.
struct QcqpProblem {
    int n = 0;
    int p = 0;
    QuadraticForm objective;
    std::vector<Constraint> constraints;

    QcqpProblem() = default;
    QcqpProblem(int n, int p, QuadraticForm objective, std::vector<Constraint> constraints = {});

    void add_constraint(QuadraticForm form, Sense sense = Sense::Leq);
    bool is_normalized() const;
    /// Throws on any violated structural invariant.
    void validate() const;
};

/// Replaces every equality F = 0 by the pair F <= 0, -F <= 0 in place.
QcqpProblem normalize_equalities(const QcqpProblem& problem);

/// Appends (x_i - lo)(x_i - hi) <= 0 for every coordinate.
QcqpProblem with_box(const QcqpProblem& problem, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);

/// Moves the listed integer coordinates to the front. Returns the permuted
/// problem; perm[k] is the original index of new coordinate k.
QcqpProblem permute_integers_first(const QcqpProblem& problem, const std::vector<int>& integer_vars,
                                   std::vector<int>* perm = nullptr);

/// True when x_1..x_p are integral within tol and every constraint holds within tol.
bool is_feasible(const QcqpProblem& problem, const Eigen::VectorXd& x, double tol);

}  // namespace miqcqp
