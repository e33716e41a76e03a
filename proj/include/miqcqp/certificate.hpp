#pragma once

#include "miqcqp/lifted.hpp"

#include <optional>
#include <string>

namespace miqcqp {

struct SdpSolution;

/// Multipliers (lambda, alpha) of the Lagrangian dual. Any pair that makes
/// [[P0 + sum lambda_i P_i, (q0 + sum lambda_i q_i)/2], [., alpha]] PSD with
/// lambda >= 0 gives the lower bound r0 + sum lambda_i r_i - alpha.
struct DualCertificate {
    Eigen::VectorXd lambda;
    double alpha = 0.0;
};

double dual_objective(const LiftedSdp& sdp, const DualCertificate& cert);

/// The bordered dual matrix for the given multipliers.
Eigen::MatrixXd dual_matrix(const LiftedSdp& sdp, const Eigen::VectorXd& lambda, double alpha);

struct Verdict {
    bool valid = false;
    std::string reason;
    explicit operator bool() const { return valid; }
};

Verdict verify(const LiftedSdp& sdp, const DualCertificate& cert, double tol);

/// Picks the smallest alpha that keeps the bordered matrix PSD within tol for
/// the given lambda (clipped at zero). When the top-left block is not PSD,
/// lambda is scaled toward zero; nullopt when no scaling certifies.
std::optional<DualCertificate> certify_multipliers(const LiftedSdp& sdp, Eigen::VectorXd lambda, double tol);

class CannotCertify : public Error {
public:
    using Error::Error;
};

/// Certificate from solver duals. Throws CannotCertify when no repair works and
/// Error when the solution status carries no usable duals.
DualCertificate extract_certificate(const SdpSolution& solution, const LiftedSdp& sdp, double tol = 1e-6);

}  // namespace miqcqp
