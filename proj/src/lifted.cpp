#include "miqcqp/lifted.hpp"

#include <cstdlib>

namespace miqcqp {

Cut Cut::canonical() const {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i) > 0) return *this;
        if (a(i) < 0) return Cut{-a, -b - 1};
    }
    return *this;
}

bool Cut::is_canonical() const {
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) != 0) return a(i) > 0;
    return false;
}

std::strong_ordering compare(const Cut& lhs, const Cut& rhs) {
    if (auto c = lhs.a.size() <=> rhs.a.size(); c != 0) return c;
    for (Eigen::Index i = 0; i < lhs.a.size(); ++i)
        if (auto c = lhs.a(i) <=> rhs.a(i); c != 0) return c;
    return lhs.b <=> rhs.b;
}

void check_cut(const Cut& cut, int n, int p) {
    if (cut.a.size() != n) throw Error("cut: a has length " + std::to_string(cut.a.size()) + ", expected " +
                                       std::to_string(n));
    if ((cut.a.array() == 0).all()) throw Error("cut: a must be nonzero");
    for (int j = p; j < n; ++j)
        if (cut.a(j) != 0) throw Error("cut: a is nonzero on continuous coordinate " + std::to_string(j));
}

std::string Provenance::str() const {
    switch (kind) {
        case Kind::Original: return "ORIGINAL(" + std::to_string(id) + ")";
        case Kind::Cut: return "CUT(" + std::to_string(id) + ")";
        case Kind::Branch: return "BRANCH(" + std::to_string(id) + ")";
        case Kind::Extra: return "EXTRA(" + std::to_string(id) + ")";
    }
    return "?";
}

void LiftedSdp::validate() const {
    auto check = [&](const Eigen::MatrixXd& P, const Eigen::VectorXd& q, const std::string& what) {
        if (P.rows() != n || P.cols() != n || q.size() != n) throw Error(what + ": dimension mismatch");
        if (n > 0 && (P - P.transpose()).cwiseAbs().maxCoeff() > 0.0)
            throw Error(what + ": matrix is not symmetric");
    };
    check(P0, q0, "objective");
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        check(constraints[i].P, constraints[i].q, constraints[i].tag.str());
        for (std::size_t j = 0; j < i; ++j)
            if (constraints[j].tag == constraints[i].tag)
                throw Error("lifted sdp: duplicate provenance tag " + constraints[i].tag.str());
    }
}

int LiftedSdp::find(const Provenance& tag) const {
    for (std::size_t i = 0; i < constraints.size(); ++i)
        if (constraints[i].tag == tag) return static_cast<int>(i);
    return -1;
}

void LiftedSdp::add(LiftedConstraint c) {
    if (find(c.tag) >= 0) throw Error("lifted sdp: duplicate provenance tag " + c.tag.str());
    constraints.push_back(std::move(c));
}

double lifted_value(const LiftedConstraint& c, const Eigen::MatrixXd& X, const Eigen::VectorXd& x) {
    return (c.P.cwiseProduct(X)).sum() + c.q.dot(x) + c.r;
}

double lifted_objective(const LiftedSdp& sdp, const Eigen::MatrixXd& X, const Eigen::VectorXd& x) {
    return (sdp.P0.cwiseProduct(X)).sum() + sdp.q0.dot(x) + sdp.r0;
}

LiftedConstraint lift_cut(const Cut& cut, int id) {
    const Eigen::VectorXd a = cut.a_double();
    const double b = static_cast<double>(cut.b);
    LiftedConstraint c;
    c.P = -a * a.transpose();
    c.q = (2.0 * b + 1.0) * a;
    c.r = -b * (b + 1.0);
    c.tag = Provenance::cut(id);
    c.cut = cut;
    return c;
}

LiftedSdp lift(const QcqpProblem& problem, const std::vector<Cut>& cuts) {
    problem.validate();
    if (!problem.is_normalized()) throw Error("lift: problem has equality constraints; normalize first");
    LiftedSdp sdp;
    sdp.n = problem.n;
    sdp.P0 = problem.objective.P;
    sdp.q0 = problem.objective.q;
    sdp.r0 = problem.objective.r;
    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
        const auto& f = problem.constraints[i].form;
        sdp.constraints.push_back({f.P, f.q, f.r, Provenance::original(static_cast<int>(i)), std::nullopt});
    }
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        check_cut(cuts[k], problem.n, problem.p);
        sdp.constraints.push_back(lift_cut(cuts[k], static_cast<int>(k)));
    }
    return sdp;
}

LiftedConstraint lift_branch(const IntVector& c, long long d, int side, int id) {
    const Eigen::Index n = c.size();
    LiftedConstraint out;
    out.P = Eigen::MatrixXd::Zero(n, n);
    if (side == 0) {
        out.q = c.cast<double>();
        out.r = -static_cast<double>(d);
    } else {
        out.q = -c.cast<double>();
        out.r = static_cast<double>(d) + 1.0;
    }
    out.tag = Provenance::branch(id);
    return out;
}

}  // namespace miqcqp
