#include "miqcqp/sdp_solver.hpp"

#include "miqcqp/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace miqcqp {

void SolverSettings::validate() const {
    if (!(rel_gap_tol > 0.0) || !(feas_tol > 0.0) || !(certify_tol > 0.0))
        throw Error("solver settings: tolerances must be positive");
    if (max_iters < 1) throw Error("solver settings: max_iters must be at least 1");
    if (!(step_fraction > 0.0 && step_fraction < 1.0)) throw Error("solver settings: step_fraction must be in (0, 1)");
}

std::string to_string(SdpStatus status) {
    switch (status) {
        case SdpStatus::Optimal: return "OPTIMAL";
        case SdpStatus::MaxIters: return "MAX_ITERS";
        case SdpStatus::PrimalInfeasible: return "PRIMAL_INFEASIBLE";
        case SdpStatus::UnboundedBelow: return "UNBOUNDED_BELOW";
    }
    return "UNKNOWN";
}

double SdpSolution::dual(const LiftedSdp& sdp, const Provenance& tag) const {
    const int i = sdp.find(tag);
    if (i < 0) throw Error("unknown constraint tag " + tag.str());
    return duals.at(static_cast<std::size_t>(i));
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Scaled conic data. Every row i is <A_i, Z> (+ s_i) = b_i with
// A_i = sum_{k in row i} d_k u_k u_k^T stored as columns of U.
struct Row {
    double b = 0.0;
    double scale = 1.0;   // A_i(scaled) = A_i(original) / scale
    bool ineq = true;
    int first = 0;        // first column in U
    int count = 0;
    int source = -1;      // lifted constraint index, -1 for the bordered unit entry
    int partner = -1;     // lifted index of the negated twin when merged into an equality
};

struct ConicData {
    int N = 0;
    MatrixXd C;
    double c_scale = 1.0;
    std::vector<Row> rows;
    MatrixXd U;
    VectorXd d;
    VectorXd b;
    std::vector<int> ineq;  // row indices with a slack
    double b_norm = 0.0;
    double c_norm = 0.0;
};

MatrixXd bordered(const MatrixXd& P, const VectorXd& q) {
    const Eigen::Index n = P.rows();
    MatrixXd A = MatrixXd::Zero(n + 1, n + 1);
    A.topLeftCorner(n, n) = P;
    A.topRightCorner(n, 1) = 0.5 * q;
    A.bottomLeftCorner(1, n) = 0.5 * q.transpose();
    return A;
}

bool is_negated(const LiftedConstraint& a, const LiftedConstraint& b) {
    if (a.r != -b.r) return false;
    if (!(a.q.array() == -b.q.array()).all()) return false;
    return (a.P.array() == -b.P.array()).all();
}

ConicData build(const LiftedSdp& sdp) {
    ConicData data;
    const int n = sdp.n;
    const int N = n + 1;
    data.N = N;
    data.C = bordered(sdp.P0, sdp.q0);
    data.c_scale = data.C.norm();
    if (!(data.c_scale > 0.0)) data.c_scale = 1.0;
    data.C /= data.c_scale;

    const int m = static_cast<int>(sdp.constraints.size());
    std::vector<char> merged(static_cast<std::size_t>(m), 0);
    std::vector<int> partner(static_cast<std::size_t>(m), -1);
    for (int i = 0; i < m; ++i) {
        const auto& ci = sdp.constraints[static_cast<std::size_t>(i)];
        if (merged[i]) continue;
        if (ci.r == 0.0 && ci.q.isZero(0.0) && ci.P.isZero(0.0)) continue;
        for (int j = i + 1; j < m; ++j) {
            const auto& cj = sdp.constraints[static_cast<std::size_t>(j)];
            if (merged[j]) continue;
            if (is_negated(ci, cj)) {
                partner[i] = j;
                merged[j] = 1;
                break;
            }
        }
    }

    std::vector<VectorXd> cols;
    std::vector<double> dvals;
    auto add_row = [&](const MatrixXd& A, double b, double norm, bool ineq, int source, int twin) {
        Row row;
        row.scale = norm > 0.0 ? norm : 1.0;
        row.b = b / row.scale;
        row.ineq = ineq;
        row.source = source;
        row.partner = twin;
        row.first = static_cast<int>(cols.size());
        if (A.squaredNorm() > 0.0) {
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(A / row.scale);
            const double big = es.eigenvalues().cwiseAbs().maxCoeff();
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                if (std::abs(es.eigenvalues()(k)) <= 1e-13 * big) continue;
                cols.push_back(es.eigenvectors().col(k));
                dvals.push_back(es.eigenvalues()(k));
            }
        }
        row.count = static_cast<int>(cols.size()) - row.first;
        data.rows.push_back(row);
    };

    {
        Row row;
        row.b = 1.0;
        row.ineq = false;
        row.first = static_cast<int>(cols.size());
        row.count = 1;
        cols.push_back(VectorXd::Unit(N, n));
        dvals.push_back(1.0);
        data.rows.push_back(row);
    }
    for (int i = 0; i < m; ++i) {
        if (merged[i]) continue;
        const auto& c = sdp.constraints[static_cast<std::size_t>(i)];
        const double norm = std::sqrt(c.P.squaredNorm() + c.q.squaredNorm() + c.r * c.r);
        add_row(bordered(c.P, c.q), -c.r, norm, partner[i] < 0, i, partner[i]);
    }

    const int K = static_cast<int>(cols.size());
    data.U.resize(N, K);
    data.d.resize(K);
    for (int k = 0; k < K; ++k) {
        data.U.col(k) = cols[static_cast<std::size_t>(k)];
        data.d(k) = dvals[static_cast<std::size_t>(k)];
    }
    data.b.resize(static_cast<Eigen::Index>(data.rows.size()));
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        data.b(static_cast<Eigen::Index>(r)) = data.rows[r].b;
        if (data.rows[r].ineq) data.ineq.push_back(static_cast<int>(r));
    }
    data.b_norm = data.b.norm();
    data.c_norm = data.C.norm();
    return data;
}

/// Cholesky of the Schur complement. Near the optimum M loses definiteness to
/// rounding; a growing diagonal shift restores it and iterative refinement
/// against the unshifted M recovers the accuracy.
class SchurSolver {
public:
    explicit SchurSolver(const MatrixXd& M) : M_(M) {
        llt_.compute(M);
        if (llt_.info() == Eigen::Success) return;
        const double base = std::max(M.diagonal().cwiseAbs().maxCoeff(), 1e-300);
        for (double eps = 1e-14; eps <= 1e-6; eps *= 10.0) {
            MatrixXd shifted = M;
            shifted.diagonal().array() += eps * base;
            llt_.compute(shifted);
            if (llt_.info() == Eigen::Success) {
                shifted_ = true;
                return;
            }
        }
        ok_ = false;
    }

    bool ok() const { return ok_; }

    VectorXd solve(const VectorXd& rhs) const {
        VectorXd x = llt_.solve(rhs);
        if (!shifted_) return x;
        for (int k = 0; k < 5; ++k) {
            const VectorXd r = rhs - M_ * x;
            x += llt_.solve(r);
        }
        return x;
    }

private:
    const MatrixXd& M_;
    Eigen::LLT<MatrixXd> llt_;
    bool shifted_ = false;
    bool ok_ = true;
};

class Ipm {
public:
    Ipm(const LiftedSdp& sdp, const SolverSettings& settings)
        : sdp_(sdp), settings_(settings), data_(build(sdp)) {}

    SdpSolution run();

private:
    int rows() const { return static_cast<int>(data_.rows.size()); }

    VectorXd apply(const MatrixXd& Z) const {
        const MatrixXd W = Z * data_.U;
        const VectorXd diag = (data_.U.cwiseProduct(W)).colwise().sum().transpose().cwiseProduct(data_.d);
        VectorXd out(rows());
        for (int r = 0; r < rows(); ++r) out(r) = diag.segment(data_.rows[r].first, data_.rows[r].count).sum();
        return out;
    }

    MatrixXd adjoint(const VectorXd& y) const {
        VectorXd w(data_.d.size());
        for (int r = 0; r < rows(); ++r)
            w.segment(data_.rows[r].first, data_.rows[r].count) =
                y(r) * data_.d.segment(data_.rows[r].first, data_.rows[r].count);
        MatrixXd out = data_.U * w.asDiagonal() * data_.U.transpose();
        return 0.5 * (out + out.transpose());
    }

    MatrixXd schur(const MatrixXd& Z, const MatrixXd& Sinv) const {
        const MatrixXd& U = data_.U;
        MatrixXd T = (U.transpose() * Z * U).cwiseProduct(U.transpose() * Sinv * U);
        T = data_.d.asDiagonal() * T * data_.d.asDiagonal();
        const int m = rows();
        MatrixXd partial(m, T.cols());
        for (int r = 0; r < m; ++r)
            partial.row(r) = T.middleRows(data_.rows[r].first, data_.rows[r].count).colwise().sum();
        MatrixXd M(m, m);
        for (int r = 0; r < m; ++r)
            M.col(r) = partial.middleCols(data_.rows[r].first, data_.rows[r].count).rowwise().sum();
        return 0.5 * (M + M.transpose());
    }

    static double max_step(const MatrixXd& Z, const MatrixXd& dZ) {
        Eigen::LLT<MatrixXd> llt(Z);
        if (llt.info() != Eigen::Success) return 0.0;
        MatrixXd W = llt.matrixL().solve(dZ);
        W = llt.matrixL().solve(W.transpose()).transpose();
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (W + W.transpose()), Eigen::EigenvaluesOnly);
        const double lmin = es.eigenvalues()(0);
        return lmin < 0.0 ? -1.0 / lmin : kInf;
    }

    double max_step(const VectorXd& v, const VectorXd& dv) const {
        double step = kInf;
        for (int r : data_.ineq)
            if (dv(r) < 0.0) step = std::min(step, -v(r) / dv(r));
        return step;
    }

    /// Original-convention multipliers for every lifted constraint.
    std::vector<double> multipliers(const VectorXd& y) const {
        std::vector<double> lambda(sdp_.constraints.size(), 0.0);
        for (const auto& row : data_.rows) {
            if (row.source < 0) continue;
            const std::size_t src = static_cast<std::size_t>(row.source);
            const double v = -y(&row - data_.rows.data()) * data_.c_scale / row.scale;
            if (row.partner < 0) {
                lambda[src] = std::max(v, 0.0);
            } else {
                lambda[src] = std::max(v, 0.0);
                lambda[static_cast<std::size_t>(row.partner)] = std::max(-v, 0.0);
            }
        }
        return lambda;
    }

    bool farkas_primal(const VectorXd& y) const {
        const double by = data_.b.dot(y);
        if (!(by > 0.0)) return false;
        const VectorXd yr = y / by;
        for (int r : data_.ineq)
            if (-yr(r) < -settings_.feas_tol) return false;
        const MatrixXd Sr = -adjoint(yr);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(Sr, Eigen::EigenvaluesOnly);
        return es.eigenvalues()(0) >= -settings_.feas_tol;
    }

    bool farkas_dual(const MatrixXd& Z, const VectorXd& s) const {
        const double cz = (data_.C.cwiseProduct(Z)).sum();
        if (!(cz < 0.0)) return false;
        VectorXd res = apply(Z);
        for (int r : data_.ineq) res(r) += s(r);
        return res.norm() / (-cz) <= settings_.feas_tol;
    }

    const LiftedSdp& sdp_;
    SolverSettings settings_;
    ConicData data_;
};

SdpSolution Ipm::run() {
    const int N = data_.N;
    const int m = rows();
    const int mi = static_cast<int>(data_.ineq.size());
    const double cs = data_.c_scale;
    const double dim = static_cast<double>(N + mi);

    MatrixXd Z = MatrixXd::Identity(N, N);
    MatrixXd S = MatrixXd::Identity(N, N);
    VectorXd y = VectorXd::Zero(m);
    VectorXd s = VectorXd::Zero(m), t = VectorXd::Zero(m);
    for (int r : data_.ineq) s(r) = t(r) = 1.0;

    SdpSolution sol;
    sol.status = SdpStatus::MaxIters;
    std::vector<double> best_duals;
    double best_bound = -kInf;
    int stalls = 0;
    double pinf = kInf, dinf = kInf, relgap = kInf;
    double pobj = 0.0, dobj = 0.0;

    int iter = 0;
    for (;; ++iter) {
        VectorXd Rp = data_.b - apply(Z);
        for (int r : data_.ineq) Rp(r) -= s(r);
        const MatrixXd Rd = data_.C - adjoint(y) - S;
        VectorXd rdl = VectorXd::Zero(m);
        for (int r : data_.ineq) rdl(r) = -y(r) - t(r);

        const double zs = (Z.cwiseProduct(S)).sum() + s.dot(t);
        const double mu = zs / dim;
        pobj = cs * (data_.C.cwiseProduct(Z)).sum() + sdp_.r0;
        dobj = cs * data_.b.dot(y) + sdp_.r0;
        pinf = Rp.norm() / (1.0 + data_.b_norm);
        dinf = (Rd.norm() + rdl.norm()) / (1.0 + data_.c_norm);
        relgap = std::max(std::abs(pobj - dobj), cs * zs) / (1.0 + std::abs(pobj));

        const auto lambda = multipliers(y);
        {
            const Eigen::VectorXd lv =
                Eigen::Map<const Eigen::VectorXd>(lambda.data(), static_cast<Eigen::Index>(lambda.size()));
            double bound = -kInf;
            if (auto cert = certify_multipliers(sdp_, lv, settings_.certify_tol)) bound = dual_objective(sdp_, *cert);
            sol.iterate_bounds.push_back(bound);
            if (bound > best_bound || best_duals.empty()) {
                if (bound > best_bound) best_bound = bound;
                best_duals = lambda;
            }
        }

        if (pinf <= settings_.feas_tol && dinf <= settings_.feas_tol && relgap <= settings_.rel_gap_tol) {
            sol.status = SdpStatus::Optimal;
            break;
        }
        if (farkas_primal(y)) {
            sol.status = SdpStatus::PrimalInfeasible;
            break;
        }
        if (farkas_dual(Z, s)) {
            sol.status = SdpStatus::UnboundedBelow;
            break;
        }
        if (iter >= settings_.max_iters) break;

        Eigen::LLT<MatrixXd> sllt(S);
        if (sllt.info() != Eigen::Success) break;
        const MatrixXd Sinv = sllt.solve(MatrixXd::Identity(N, N));

        MatrixXd M = schur(Z, Sinv);
        for (int r : data_.ineq) M(r, r) += s(r) / t(r);
        const SchurSolver msolve(M);
        if (!msolve.ok()) break;

        struct Direction {
            MatrixXd dZ, dS;
            VectorXd dy, ds, dt;
        };
        auto direction = [&](double target, const MatrixXd* corrZ, const VectorXd* corrL) {
            MatrixXd lead = Z * Rd;
            if (corrZ) lead += *corrZ;
            const MatrixXd H = target * Sinv - Z - lead * Sinv;
            VectorXd h = VectorXd::Zero(m);
            for (int r : data_.ineq) {
                const double c = corrL ? (*corrL)(r) : 0.0;
                h(r) = (target - s(r) * t(r) - c) / t(r) - s(r) / t(r) * rdl(r);
            }
            const VectorXd rhs = Rp - apply(H) - h;
            Direction dir;
            dir.dy = msolve.solve(rhs);
            dir.dS = Rd - adjoint(dir.dy);
            MatrixXd lead2 = Z * dir.dS;
            if (corrZ) lead2 += *corrZ;
            MatrixXd dZ = target * Sinv - Z - lead2 * Sinv;
            dir.dZ = 0.5 * (dZ + dZ.transpose());
            dir.dt = VectorXd::Zero(m);
            dir.ds = VectorXd::Zero(m);
            for (int r : data_.ineq) {
                const double c = corrL ? (*corrL)(r) : 0.0;
                dir.dt(r) = rdl(r) - dir.dy(r);
                dir.ds(r) = (target - s(r) * t(r) - c - s(r) * dir.dt(r)) / t(r);
            }
            return dir;
        };

        const Direction pred = direction(0.0, nullptr, nullptr);
        const double ap_aff = std::min({1.0, max_step(Z, pred.dZ), max_step(s, pred.ds)});
        const double ad_aff = std::min({1.0, max_step(S, pred.dS), max_step(t, pred.dt)});
        const double mu_aff = ((Z + ap_aff * pred.dZ).cwiseProduct(S + ad_aff * pred.dS).sum() +
                               (s + ap_aff * pred.ds).dot(t + ad_aff * pred.dt)) /
                              dim;
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::clamp(sigma, 0.0, 1.0);

        const MatrixXd corrZ = pred.dZ * pred.dS;
        const VectorXd corrL = pred.ds.cwiseProduct(pred.dt);
        const Direction dir = direction(sigma * mu, &corrZ, &corrL);

        const double gamma = settings_.step_fraction;
        const double ap = std::min({1.0, gamma * max_step(Z, dir.dZ), gamma * max_step(s, dir.ds)});
        const double ad = std::min({1.0, gamma * max_step(S, dir.dS), gamma * max_step(t, dir.dt)});
        if (!(ap > 0.0) || !(ad > 0.0) || !dir.dy.allFinite() || !dir.dZ.allFinite()) break;

        Z += ap * dir.dZ;
        s += ap * dir.ds;
        y += ad * dir.dy;
        S += ad * dir.dS;
        t += ad * dir.dt;
        Z = 0.5 * (Z + Z.transpose()).eval();
        S = 0.5 * (S + S.transpose()).eval();

        stalls = (std::max(ap, ad) < 1e-10) ? stalls + 1 : 0;
        if (stalls >= 3) break;
    }

    const int n = sdp_.n;
    const double zn = Z(n, n);
    sol.iterations = iter;
    sol.primal_infeasibility = pinf;
    sol.dual_infeasibility = dinf;
    sol.rel_gap = relgap;
    if (sol.status == SdpStatus::UnboundedBelow || !(zn > 0.0)) {
        sol.X = Z.topLeftCorner(n, n);
        sol.x = Z.topRightCorner(n, 1);
    } else {
        sol.X = Z.topLeftCorner(n, n) / zn;
        sol.x = Z.topRightCorner(n, 1) / zn;
    }
    sol.X = 0.5 * (sol.X + sol.X.transpose()).eval();
    sol.f_sdp = lifted_objective(sdp_, sol.X, sol.x);
    sol.dual_objective = dobj;
    if (sol.status == SdpStatus::Optimal) {
        sol.duals = multipliers(y);
    } else {
        sol.duals = best_duals;
    }
    if (best_bound > -kInf) sol.best_certified_bound = best_bound;
    if (sol.status == SdpStatus::UnboundedBelow) sol.f_sdp = -kInf;
    if (sol.status == SdpStatus::PrimalInfeasible) sol.f_sdp = kInf;
    return sol;
}

}  // namespace

SdpSolution solve(const LiftedSdp& sdp, const SolverSettings& settings) {
    settings.validate();
    sdp.validate();
    Ipm ipm(sdp, settings);
    return ipm.run();
}

SdpSolution resolve_perturbed(const LiftedSdp& sdp, const Provenance& tag, double u, const SolverSettings& settings) {
    const int i = sdp.find(tag);
    if (i < 0) throw Error("resolve_perturbed: unknown constraint tag " + tag.str());
    LiftedSdp perturbed = sdp;
    perturbed.constraints[static_cast<std::size_t>(i)].r -= u;
    return solve(perturbed, settings);
}

}  // namespace miqcqp
