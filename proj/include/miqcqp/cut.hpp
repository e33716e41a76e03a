#pragma once

#include <Eigen/Dense>

#include <compare>
#include <vector>

namespace miqcqp {

using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// (a^T x - b)(a^T x - (b + 1)) >= 0 for integer a, b with a supported on the
/// integer coordinates. Lifted form: -Tr(a a^T X) + (2b + 1) a^T x - b(b + 1) <= 0.
struct Cut {
    IntVector a;
    long long b = 0;

    /// Flips (a, b) -> (-a, -b - 1) when needed so the first nonzero of a is positive.
    Cut canonical() const;
    bool is_canonical() const;

    Eigen::VectorXd a_double() const { return a.cast<double>(); }
};

/// Lexicographic on a, then b.
std::strong_ordering compare(const Cut& lhs, const Cut& rhs);
inline bool operator==(const Cut& lhs, const Cut& rhs) { return compare(lhs, rhs) == 0; }
inline bool operator<(const Cut& lhs, const Cut& rhs) { return compare(lhs, rhs) < 0; }

/// Throws unless a != 0 and a_j = 0 for j >= p.
void check_cut(const Cut& cut, int n, int p);

}  // namespace miqcqp
