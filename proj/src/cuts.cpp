#include "miqcqp/cuts.hpp"

#include "miqcqp/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace miqcqp {

namespace {

double violation_terms(double aXa, double ax, double b) { return -aXa + (2.0 * b + 1.0) * ax - b * (b + 1.0); }

struct Scored {
    Cut cut;
    double viol;
};

void sort_scored(std::vector<Scored>& scored) {
    std::sort(scored.begin(), scored.end(), [](const Scored& l, const Scored& r) {
        if (l.viol != r.viol) return l.viol > r.viol;
        return l.cut < r.cut;
    });
}

std::vector<Cut> take(std::vector<Scored>& scored, int cap) {
    sort_scored(scored);
    if (cap >= 0 && static_cast<int>(scored.size()) > cap) scored.resize(static_cast<std::size_t>(cap));
    std::vector<Cut> out;
    out.reserve(scored.size());
    for (auto& s : scored) out.push_back(std::move(s.cut));
    return out;
}

void check_point(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p) {
    if (X.rows() != x.size() || X.cols() != x.size()) throw Error("cut generation: X and x dimensions disagree");
    if (p < 0 || p > x.size()) throw Error("cut generation: bad integer count p");
}

}  // namespace

double violation(const Cut& cut, const Eigen::MatrixXd& X, const Eigen::VectorXd& x) {
    if (cut.a.size() != x.size() || X.rows() != x.size() || X.cols() != x.size())
        throw Error("violation: dimension mismatch");
    const Eigen::VectorXd a = cut.a_double();
    return violation_terms(a.dot(X * a), a.dot(x), static_cast<double>(cut.b));
}

long long best_b(const IntVector& a, const Eigen::VectorXd& x) {
    if (a.size() != x.size()) throw Error("best_b: dimension mismatch");
    return static_cast<long long>(std::floor(a.cast<double>().dot(x)));
}

Eigen::MatrixXd slack_matrix(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p) {
    check_point(X, x, p);
    const Eigen::VectorXd xp = x.head(p);
    return X.topLeftCorner(p, p) - xp * xp.transpose();
}

std::vector<Cut> rank_cuts(std::vector<Cut> cuts, const Eigen::MatrixXd& X, const Eigen::VectorXd& x, double eps,
                           int cap) {
    std::vector<Scored> scored;
    scored.reserve(cuts.size());
    for (auto& c : cuts) {
        Cut canon = c.canonical();
        const double v = violation(canon, X, x);
        if (v > eps) scored.push_back({std::move(canon), v});
    }
    // Duplicates share the same violation, so they are adjacent after the sort.
    sort_scored(scored);
    scored.erase(std::unique(scored.begin(), scored.end(),
                             [](const Scored& l, const Scored& r) { return l.cut == r.cut; }),
                 scored.end());
    return take(scored, cap);
}

std::vector<Cut> enumerate_cuts(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p, int k, double eps,
                                int cap) {
    check_point(X, x, p);
    if (k < 1 || k > 3) throw Error("enumerate_cuts: k must be 1, 2 or 3");
    const Eigen::Index n = x.size();
    std::vector<Scored> scored;

    auto consider = [&](const std::array<int, 3>& idx, const std::array<int, 3>& sign, int size) {
        double ax = 0.0, aXa = 0.0;
        for (int u = 0; u < size; ++u) {
            ax += sign[u] * x(idx[u]);
            for (int w = 0; w < size; ++w) aXa += sign[u] * sign[w] * X(idx[u], idx[w]);
        }
        const double b = std::floor(ax);
        const double v = violation_terms(aXa, ax, b);
        if (!(v > eps)) return;
        Cut cut;
        cut.a = IntVector::Zero(n);
        for (int u = 0; u < size; ++u) cut.a(idx[u]) = sign[u];
        cut.b = static_cast<long long>(b);
        scored.push_back({std::move(cut), v});
    };

    for (int i = 0; i < p; ++i) {
        consider({i, 0, 0}, {1, 0, 0}, 1);
        if (k < 2) continue;
        for (int j = i + 1; j < p; ++j) {
            for (int sj : {1, -1}) {
                consider({i, j, 0}, {1, sj, 0}, 2);
                if (k < 3) continue;
                for (int l = j + 1; l < p; ++l)
                    for (int sl : {1, -1}) consider({i, j, l}, {1, sj, sl}, 3);
            }
        }
    }
    return take(scored, cap);
}

EigCutResult eig_cut(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p, const EigCutOptions& options) {
    check_point(X, x, p);
    EigCutResult result;
    if (p == 0) {
        result.no_cut_certified = true;
        result.lambda_min = std::numeric_limits<double>::infinity();
        return result;
    }
    const auto eig = sym_eig(SymMatrixd(slack_matrix(X, x, p)));
    result.lambda_min = eig.values(0);
    if (result.lambda_min >= 0.25) {
        result.no_cut_certified = true;
        return result;
    }

    const Eigen::Index n = x.size();
    std::vector<Cut> candidates;
    auto push = [&](const Eigen::VectorXd& a_p) {
        if ((a_p.array() == 0.0).all()) return;
        Cut cut;
        cut.a = IntVector::Zero(n);
        for (int i = 0; i < p; ++i) cut.a(i) = static_cast<long long>(a_p(i));
        cut = cut.canonical();
        cut.b = best_b(cut.a, x);
        candidates.push_back(std::move(cut));
    };

    // The minimal eigenspace may be degenerate; every basis vector of it is used.
    const double cluster = 1e-9 * (1.0 + std::abs(result.lambda_min));
    for (Eigen::Index k = 0; k < eig.values.size() && eig.values(k) <= result.lambda_min + cluster; ++k) {
        const Eigen::VectorXd v = eig.vectors.col(k);
        const double vmax = v.cwiseAbs().maxCoeff();
        if (!(vmax > 0.0)) continue;
        for (double t : options.scalings) push((t / vmax * v).array().round().matrix());

        std::vector<int> order(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) order[static_cast<std::size_t>(i)] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](int l, int r) { return std::abs(v(l)) > std::abs(v(r)); });
        for (int kk = 1; kk <= std::min(options.k_round, p); ++kk) {
            Eigen::VectorXd a = Eigen::VectorXd::Zero(p);
            for (int j = 0; j < kk; ++j) {
                const int i = order[static_cast<std::size_t>(j)];
                a(i) = v(i) >= 0.0 ? 1.0 : -1.0;
            }
            push(a);
        }
    }
    result.cuts = rank_cuts(std::move(candidates), X, x, options.eps, -1);
    return result;
}

std::vector<Cut> random_cuts(const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p, int count, int nnz,
                             double eps, std::uint64_t seed) {
    check_point(X, x, p);
    if (count <= 0) return {};
    if (nnz < 1 || nnz > p) throw Error("random_cuts: nnz must be in [1, p]");
    Rng rng(seed);
    const Eigen::Index n = x.size();
    std::vector<Cut> candidates;
    candidates.reserve(static_cast<std::size_t>(count));
    std::vector<int> pool(static_cast<std::size_t>(p));
    for (int s = 0; s < count; ++s) {
        for (int i = 0; i < p; ++i) pool[static_cast<std::size_t>(i)] = i;
        Cut cut;
        cut.a = IntVector::Zero(n);
        // Partial Fisher-Yates for a uniform support.
        for (int j = 0; j < nnz; ++j) {
            const auto pick = j + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - j)));
            std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick)]);
            cut.a(pool[static_cast<std::size_t>(j)]) = rng.coin() ? 1 : -1;
        }
        cut = cut.canonical();
        cut.b = best_b(cut.a, x);
        candidates.push_back(std::move(cut));
    }
    return rank_cuts(std::move(candidates), X, x, eps, -1);
}

LiftedConstraint sphere_cut_lifted(int n, int p, int id) {
    if (p != n) throw Error("sphere cut requires a pure integer problem (p = n)");
    LiftedConstraint c;
    c.P = -Eigen::MatrixXd::Identity(n, n);
    c.q = Eigen::VectorXd::Ones(n);
    c.r = 0.0;
    c.tag = Provenance::extra(id);
    return c;
}

}  // namespace miqcqp
