#include "miqcqp/certificate.hpp"

#include "miqcqp/sdp_solver.hpp"

#include <cmath>

namespace miqcqp {

namespace {

void check_size(const LiftedSdp& sdp, const Eigen::VectorXd& lambda) {
    if (lambda.size() != static_cast<Eigen::Index>(sdp.constraints.size()))
        throw Error("dual certificate: lambda has length " + std::to_string(lambda.size()) + ", expected " +
                    std::to_string(sdp.constraints.size()));
}

struct DualBlocks {
    Eigen::MatrixXd Y;
    Eigen::VectorXd y;
};

DualBlocks dual_blocks(const LiftedSdp& sdp, const Eigen::VectorXd& lambda) {
    DualBlocks out{sdp.P0, sdp.q0};
    for (std::size_t i = 0; i < sdp.constraints.size(); ++i) {
        const double l = lambda(static_cast<Eigen::Index>(i));
        if (l == 0.0) continue;
        out.Y.noalias() += l * sdp.constraints[i].P;
        out.y.noalias() += l * sdp.constraints[i].q;
    }
    out.y *= 0.5;
    return out;
}

}  // namespace

double dual_objective(const LiftedSdp& sdp, const DualCertificate& cert) {
    check_size(sdp, cert.lambda);
    double v = sdp.r0 - cert.alpha;
    for (std::size_t i = 0; i < sdp.constraints.size(); ++i)
        v += cert.lambda(static_cast<Eigen::Index>(i)) * sdp.constraints[i].r;
    return v;
}

Eigen::MatrixXd dual_matrix(const LiftedSdp& sdp, const Eigen::VectorXd& lambda, double alpha) {
    check_size(sdp, lambda);
    const auto blocks = dual_blocks(sdp, lambda);
    const int n = sdp.n;
    Eigen::MatrixXd B(n + 1, n + 1);
    B.topLeftCorner(n, n) = blocks.Y;
    B.topRightCorner(n, 1) = blocks.y;
    B.bottomLeftCorner(1, n) = blocks.y.transpose();
    B(n, n) = alpha;
    return B;
}

Verdict verify(const LiftedSdp& sdp, const DualCertificate& cert, double tol) {
    if (cert.lambda.size() != static_cast<Eigen::Index>(sdp.constraints.size()))
        return {false, "lambda length does not match the constraint count"};
    if (!cert.lambda.allFinite() || !std::isfinite(cert.alpha)) return {false, "non-finite multiplier"};
    for (Eigen::Index i = 0; i < cert.lambda.size(); ++i)
        if (cert.lambda(i) < -tol)
            return {false, "negative multiplier on " + sdp.constraints[static_cast<std::size_t>(i)].tag.str()};
    const SymMatrixd B(dual_matrix(sdp, cert.lambda, cert.alpha));
    if (!chol_psd(B, tol)) return {false, "bordered dual matrix is not PSD"};
    return {true, {}};
}

std::optional<DualCertificate> certify_multipliers(const LiftedSdp& sdp, Eigen::VectorXd lambda, double tol) {
    check_size(sdp, lambda);
    lambda = lambda.cwiseMax(0.0);
    if (!lambda.allFinite()) return std::nullopt;
    const double shift = 0.1 * tol;

    auto top_min_eig = [&](double s) {
        const auto blocks = dual_blocks(sdp, s * lambda);
        return min_eigenvalue(SymMatrixd(blocks.Y));
    };
    double scale = 1.0;
    if (sdp.n > 0 && top_min_eig(1.0) < -0.5 * shift) {
        if (top_min_eig(0.0) < -0.5 * shift) return std::nullopt;
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (lo + hi);
            (top_min_eig(mid) >= -0.5 * shift ? lo : hi) = mid;
        }
        scale = lo;
    }
    lambda *= scale;

    const auto blocks = dual_blocks(sdp, lambda);
    double alpha = 0.0;
    if (sdp.n > 0) {
        // alpha = y^T Y^+ y on well-conditioned eigendirections of Y. Directions with
        // eigenvalue below sqrt(shift) use the regularized (mu + shift)^{-1} instead.
        const auto eig = sym_eig(SymMatrixd(blocks.Y));
        const Eigen::VectorXd proj = eig.vectors.transpose() * blocks.y;
        const double exact_floor = std::sqrt(shift);
        for (Eigen::Index k = 0; k < proj.size(); ++k) {
            const double mu = eig.values(k);
            alpha += proj(k) * proj(k) / (mu >= exact_floor ? mu : std::max(mu, 0.0) + shift);
        }
    }
    DualCertificate cert{lambda, alpha};
    if (!verify(sdp, cert, tol)) return std::nullopt;
    return cert;
}

DualCertificate extract_certificate(const SdpSolution& solution, const LiftedSdp& sdp, double tol) {
    if (solution.status != SdpStatus::Optimal && solution.status != SdpStatus::MaxIters)
        throw Error("extract_certificate: solution status " + to_string(solution.status) + " carries no duals");
    if (solution.duals.size() != sdp.constraints.size())
        throw Error("extract_certificate: dual vector does not match the lifted problem");
    const Eigen::VectorXd lambda = Eigen::Map<const Eigen::VectorXd>(solution.duals.data(),
                                                                     static_cast<Eigen::Index>(solution.duals.size()));
    auto cert = certify_multipliers(sdp, lambda, tol);
    if (!cert) throw CannotCertify("extract_certificate: no nonnegative multiplier repair gives a PSD dual matrix");
    return *cert;
}

}  // namespace miqcqp
