#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <stdexcept>

namespace miqcqp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense symmetric matrix. Only the lower triangle is writable through set();
/// the upper triangle mirrors it, so the stored matrix is always symmetric.
template <typename Scalar>
class SymMatrix {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    SymMatrix() = default;
    explicit SymMatrix(Eigen::Index dim) : data_(Matrix::Zero(dim, dim)) {}

    /// Symmetrizes the argument as (M + M^T) / 2.
    template <typename Derived>
    explicit SymMatrix(const Eigen::MatrixBase<Derived>& m) {
        if (m.rows() != m.cols())
            throw Error("SymMatrix: matrix is not square");
        data_ = (m + m.transpose()) / Scalar(2);
    }

    static SymMatrix identity(Eigen::Index dim) {
        SymMatrix s(dim);
        s.data_.setIdentity();
        return s;
    }

    Eigen::Index dim() const { return data_.rows(); }
    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

    void set(Eigen::Index i, Eigen::Index j, Scalar v) {
        data_(i, j) = v;
        data_(j, i) = v;
    }

    const Matrix& matrix() const { return data_; }

private:
    Matrix data_;
};

using SymMatrixd = SymMatrix<double>;

template <typename Scalar>
struct SymEig {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;   // ascending
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // orthonormal columns
};

template <typename Scalar>
struct EigPair {
    Scalar value;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
};

namespace detail {
template <typename Scalar>
void require_finite(const SymMatrix<Scalar>& m, const char* who) {
    if (!m.matrix().allFinite())
        throw Error(std::string(who) + ": non-finite matrix entry");
}
}  // namespace detail

/// Full eigendecomposition, eigenvalues ascending.
template <typename Scalar>
SymEig<Scalar> sym_eig(const SymMatrix<Scalar>& m) {
    detail::require_finite(m, "sym_eig");
    if (m.dim() == 0) return {};
    Eigen::SelfAdjointEigenSolver<typename SymMatrix<Scalar>::Matrix> es(m.matrix());
    if (es.info() != Eigen::Success)
        throw Error("sym_eig: eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

template <typename Scalar>
EigPair<Scalar> min_eigpair(const SymMatrix<Scalar>& m) {
    if (m.dim() == 0) throw Error("min_eigpair: empty matrix");
    auto eig = sym_eig(m);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = eig.vectors.col(0);
    v.normalize();
    return {eig.values(0), v};
}

template <typename Scalar>
Scalar min_eigenvalue(const SymMatrix<Scalar>& m) {
    if (m.dim() == 0) return Scalar(0);
    detail::require_finite(m, "min_eigenvalue");
    Eigen::SelfAdjointEigenSolver<typename SymMatrix<Scalar>::Matrix> es(m.matrix(),
                                                                          Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

template <typename Scalar>
struct CholFactor {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> lower;
    Scalar shift;  // L L^T = M + shift * I
};

/// Cholesky-based PSD test. Tries the plain factorization first and then the
/// factorization of M + shift_tol * I. An empty result means NOT_PSD.
template <typename Scalar>
std::optional<CholFactor<Scalar>> chol_psd(const SymMatrix<Scalar>& m, Scalar shift_tol) {
    using Matrix = typename SymMatrix<Scalar>::Matrix;
    if (!m.matrix().allFinite()) return std::nullopt;
    const auto d = m.dim();
    if (d == 0) return CholFactor<Scalar>{Matrix(0, 0), Scalar(0)};
    for (Scalar shift : {Scalar(0), shift_tol}) {
        Matrix shifted = m.matrix();
        shifted.diagonal().array() += shift;
        Eigen::LLT<Matrix> llt(shifted);
        if (llt.info() == Eigen::Success) {
            Matrix lower = llt.matrixL();
            if (lower.allFinite()) return CholFactor<Scalar>{lower, shift};
        }
        if (shift_tol <= Scalar(0)) break;
    }
    return std::nullopt;
}

/// Eigenvalue clipping at zero: returns V max(Lambda, 0) V^T.
template <typename Scalar>
typename SymMatrix<Scalar>::Matrix psd_project(const SymMatrix<Scalar>& m, Scalar floor_tol = Scalar(1e-8)) {
    auto eig = sym_eig(m);
    auto vals = eig.values;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        if (vals(i) < floor_tol) vals(i) = Scalar(0);
    return eig.vectors * vals.asDiagonal() * eig.vectors.transpose();
}

/// Square-root factor F with F F^T = psd_project(M).
template <typename Scalar>
typename SymMatrix<Scalar>::Matrix psd_factor(const SymMatrix<Scalar>& m, Scalar floor_tol = Scalar(1e-8)) {
    auto eig = sym_eig(m);
    auto vals = eig.values;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
        vals(i) = vals(i) < floor_tol ? Scalar(0) : std::sqrt(vals(i));
    return eig.vectors * vals.asDiagonal();
}

}  // namespace miqcqp
