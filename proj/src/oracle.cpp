#include "miqcqp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace miqcqp {

double IntBox::volume() const {
    double v = 1.0;
    for (Eigen::Index i = 0; i < lo.size(); ++i) v *= static_cast<double>(hi(i) - lo(i) + 1);
    return v;
}

BruteForceResult brute_force(const QcqpProblem& problem, const IntBox& box, double feas_tol, double tie_tol) {
    problem.validate();
    if (problem.p != problem.n) throw Error("brute_force: requires a pure integer problem");
    if (box.lo.size() != problem.n || box.hi.size() != problem.n) throw Error("brute_force: box dimension mismatch");
    for (int i = 0; i < problem.n; ++i)
        if (box.lo(i) > box.hi(i)) return {std::numeric_limits<double>::infinity(), {}};
    if (box.volume() > kMaxBruteForcePoints)
        throw Error("brute_force: box has " + std::to_string(box.volume()) + " points, limit is " +
                    std::to_string(static_cast<long long>(kMaxBruteForcePoints)));

    BruteForceResult result{std::numeric_limits<double>::infinity(), {}};
    IntVector x = box.lo;
    Eigen::VectorXd xd;
    for (;;) {
        xd = x.cast<double>();
        if (is_feasible(problem, xd, feas_tol)) {
            const double f = evaluate(problem.objective, xd);
            const double tie = tie_tol * (1.0 + std::abs(f));
            if (f < result.f_star - tie) {
                result.f_star = f;
                result.argmins.assign(1, x);
            } else if (f <= result.f_star + tie) {
                result.f_star = std::min(result.f_star, f);
                result.argmins.push_back(x);
            }
        }
        int i = 0;
        while (i < problem.n && x(i) == box.hi(i)) {
            x(i) = box.lo(i);
            ++i;
        }
        if (i == problem.n) break;
        ++x(i);
    }
    return result;
}

MaxCutOracleResult brute_force_maxcut(const Eigen::MatrixXd& W) {
    if (W.rows() != W.cols()) throw Error("brute_force_maxcut: weight matrix is not square");
    const int n = static_cast<int>(W.rows());
    if (n > 22) throw Error("brute_force_maxcut: n = " + std::to_string(n) + " exceeds 22");
    MaxCutOracleResult best{0.0, Eigen::VectorXd::Ones(n)};
    if (n <= 1) return best;

    // Signs s in {+1, -1}^n with s_0 = +1; cut(s) = (1/2) sum_{i<j} W_ij (1 - s_i s_j).
    Eigen::VectorXd s = Eigen::VectorXd::Ones(n);
    Eigen::VectorXd Ws = W * s;
    double cut = 0.0;
    Eigen::VectorXd best_s = s;
    const unsigned long long count = 1ULL << (n - 1);
    for (unsigned long long g = 1; g < count; ++g) {
        const int k = 1 + std::countr_zero(g);
        cut += s(k) * Ws(k);
        Ws -= 2.0 * s(k) * W.col(k);
        s(k) = -s(k);
        if (cut > best.value) {
            best.value = cut;
            best_s = s;
        }
    }
    best.z = (best_s.array() + 1.0) / 2.0;
    return best;
}

namespace {

/// Bounding box of {x : (x - c)^T P (x - c) <= U} widened by 1. The extent along
/// e_i is sqrt(U (P^-1)_ii), never more than sqrt(U / lambda_min(P)).
IntBox ellipsoid_box(const Eigen::VectorXd& c, const Eigen::VectorXd& pinv_diag, double U, double inv_lmin) {
    const Eigen::Index n = c.size();
    IntBox box{IntVector(n), IntVector(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        // The 1e-9 keeps rounding noise from trimming an endpoint at an exact integer.
        const double radius = std::sqrt(std::max(U, 0.0) * std::clamp(pinv_diag(i), 0.0, inv_lmin)) + 1.0 + 1e-9;
        box.lo(i) = static_cast<long long>(std::ceil(c(i) - radius));
        box.hi(i) = static_cast<long long>(std::floor(c(i) + radius));
    }
    return box;
}

}  // namespace

IntBox ils_box(const Eigen::MatrixXd& A, const Eigen::VectorXd& x_cts) {
    if (A.cols() != x_cts.size()) throw Error("ils_box: dimension mismatch");
    const Eigen::Index n = x_cts.size();
    const Eigen::VectorXd sigma = Eigen::JacobiSVD<Eigen::MatrixXd>(A).singularValues();
    if (n == 0) return {};
    const double smax = sigma(0);
    const double smin = A.rows() >= n ? sigma(n - 1) : 0.0;
    if (!(smin > 1e-12 * std::max(1.0, smax))) throw Error("ils_box: A does not have full column rank");
    const Eigen::VectorXd r0 = x_cts.array().round().matrix() - x_cts;
    const double U = (A * r0).squaredNorm();
    const Eigen::MatrixXd P = A.transpose() * A;
    return ellipsoid_box(x_cts, P.ldlt().solve(Eigen::MatrixXd::Identity(n, n)).diagonal(), U, 1.0 / (smin * smin));
}

IntBox ils_box(const QcqpProblem& problem) {
    problem.validate();
    if (!problem.constraints.empty()) throw Error("ils_box: problem has constraints");
    const Eigen::Index n = problem.n;
    if (n == 0) return {};
    const auto& f = problem.objective;
    const double lmin = min_eigenvalue(SymMatrixd(f.P));
    const double lmax = f.P.cwiseAbs().maxCoeff();
    if (!(lmin > 1e-12 * std::max(1.0, lmax))) throw Error("ils_box: objective is not strictly convex");
    const Eigen::VectorXd x_cts = f.P.ldlt().solve(-0.5 * f.q);
    const double U = evaluate(f, x_cts.array().round().matrix().eval()) - evaluate(f, x_cts);
    return ellipsoid_box(x_cts, f.P.ldlt().solve(Eigen::MatrixXd::Identity(n, n)).diagonal(), U, 1.0 / lmin);
}

IntBox uniform_box(int n, long long radius) {
    return {IntVector::Constant(n, -radius), IntVector::Constant(n, radius)};
}

}  // namespace miqcqp
