#include "miqcqp/model.hpp"

#include <cmath>

namespace miqcqp {

QuadraticForm::QuadraticForm(const Eigen::MatrixXd& P_in, const Eigen::VectorXd& q_in, double r_in)
    : q(q_in), r(r_in) {
    if (P_in.rows() != P_in.cols() || P_in.rows() != q_in.size())
        throw Error("QuadraticForm: P is " + std::to_string(P_in.rows()) + "x" + std::to_string(P_in.cols()) +
                    " but q has length " + std::to_string(q_in.size()));
    P = (P_in + P_in.transpose()) / 2.0;
}

QuadraticForm QuadraticForm::zero(Eigen::Index n) {
    return {Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n), 0.0};
}

QuadraticForm QuadraticForm::operator-() const {
    QuadraticForm f;
    f.P = -P;
    f.q = -q;
    f.r = -r;
    return f;
}

QcqpProblem::QcqpProblem(int n_in, int p_in, QuadraticForm obj, std::vector<Constraint> cons)
    : n(n_in), p(p_in), objective(std::move(obj)), constraints(std::move(cons)) {
    validate();
}

void QcqpProblem::add_constraint(QuadraticForm form, Sense sense) {
    if (form.dim() != n) throw Error("add_constraint: form dimension does not match n");
    constraints.push_back({std::move(form), sense});
}

bool QcqpProblem::is_normalized() const {
    for (const auto& c : constraints)
        if (c.sense != Sense::Leq) return false;
    return true;
}

void QcqpProblem::validate() const {
    if (n < 0) throw Error("QcqpProblem: negative dimension");
    if (p < 0 || p > n) throw Error("QcqpProblem: integer count p must satisfy 0 <= p <= n");
    if (objective.dim() != n || objective.P.rows() != n)
        throw Error("QcqpProblem: objective dimension does not match n");
    for (std::size_t i = 0; i < constraints.size(); ++i)
        if (constraints[i].form.dim() != n || constraints[i].form.P.rows() != n)
            throw Error("QcqpProblem: constraint " + std::to_string(i) + " dimension does not match n");
}

QcqpProblem normalize_equalities(const QcqpProblem& problem) {
    QcqpProblem out = problem;
    out.constraints.clear();
    for (const auto& c : problem.constraints) {
        out.constraints.push_back({c.form, Sense::Leq});
        if (c.sense == Sense::Eq) out.constraints.push_back({-c.form, Sense::Leq});
    }
    return out;
}

QcqpProblem with_box(const QcqpProblem& problem, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    if (lo.size() != problem.n || hi.size() != problem.n) throw Error("with_box: bound length mismatch");
    QcqpProblem out = problem;
    for (int i = 0; i < problem.n; ++i) {
        if (lo(i) > hi(i)) throw Error("with_box: empty interval at coordinate " + std::to_string(i));
        QuadraticForm f = QuadraticForm::zero(problem.n);
        f.P(i, i) = 1.0;
        f.q(i) = -(lo(i) + hi(i));
        f.r = lo(i) * hi(i);
        out.constraints.push_back({f, Sense::Leq});
    }
    return out;
}

QcqpProblem permute_integers_first(const QcqpProblem& problem, const std::vector<int>& integer_vars,
                                   std::vector<int>* perm_out) {
    std::vector<int> perm;
    std::vector<char> used(problem.n, 0);
    for (int v : integer_vars) {
        if (v < 0 || v >= problem.n || used[v]) throw Error("permute_integers_first: bad index list");
        used[v] = 1;
        perm.push_back(v);
    }
    for (int v = 0; v < problem.n; ++v)
        if (!used[v]) perm.push_back(v);

    Eigen::PermutationMatrix<Eigen::Dynamic> pm(problem.n);
    for (int k = 0; k < problem.n; ++k) pm.indices()(k) = perm[k];
    // new x = Pi^T old x, so old x = Pi * new x.
    auto permute = [&](const QuadraticForm& f) {
        Eigen::MatrixXd P = pm.transpose() * f.P * pm;
        Eigen::VectorXd q = pm.transpose() * f.q;
        return QuadraticForm(P, q, f.r);
    };
    QcqpProblem out(problem.n, static_cast<int>(integer_vars.size()), permute(problem.objective));
    for (const auto& c : problem.constraints) out.constraints.push_back({permute(c.form), c.sense});
    if (perm_out) *perm_out = perm;
    return out;
}

bool is_feasible(const QcqpProblem& problem, const Eigen::VectorXd& x, double tol) {
    if (x.size() != problem.n) return false;
    for (int i = 0; i < problem.p; ++i)
        if (std::abs(x(i) - std::round(x(i))) > tol) return false;
    for (const auto& c : problem.constraints) {
        const double v = evaluate(c.form, x);
        if (c.sense == Sense::Leq ? v > tol : std::abs(v) > tol) return false;
    }
    return true;
}

}  // namespace miqcqp
