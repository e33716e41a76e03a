#pragma once

#include "miqcqp/instances.hpp"
#include "miqcqp/lifted.hpp"
#include "miqcqp/rng.hpp"

#include <Eigen/Dense>

namespace miqcqp::testing {

inline Eigen::MatrixXd random_symmetric(Rng& rng, int d, double scale = 1.0) {
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = scale * rng.normal();
    return m;
}

inline Eigen::VectorXd random_vector(Rng& rng, int d, double lo, double hi) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v(i) = lo + (hi - lo) * rng.uniform();
    return v;
}

inline long long random_int(Rng& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

/// A PSD slack M = V diag(mu) V^T with eigenvalues in [mu_lo, mu_hi].
inline Eigen::MatrixXd random_psd(Rng& rng, int d, double mu_lo, double mu_hi) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_symmetric(rng, d));
    const Eigen::MatrixXd V = qr.householderQ();
    const Eigen::VectorXd mu = random_vector(rng, d, mu_lo, mu_hi);
    return V * mu.asDiagonal() * V.transpose();
}

/// min (x - c)^2 over one integer.
inline QcqpProblem ils_1d(double c) {
    Eigen::MatrixXd A(1, 1);
    A << 1.0;
    return ils_problem(A, Eigen::VectorXd::Constant(1, c));
}

inline Eigen::MatrixXd triangle() {
    Eigen::MatrixXd W = Eigen::MatrixXd::Ones(3, 3);
    W.diagonal().setZero();
    return W;
}

/// The rank-1 lifted point of x.
inline Eigen::MatrixXd outer(const Eigen::VectorXd& x) { return x * x.transpose(); }

}  // namespace miqcqp::testing
