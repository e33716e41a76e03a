#pragma once

#include "miqcqp/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace miqcqp {

/// minimize ||A(x - x_cts)||^2 over x in Z^n.
struct IlsInstance {
    QcqpProblem problem;
    Eigen::MatrixXd A;
    Eigen::VectorXd x_cts;
};

/// A is 2n x n with N(0, 1) entries drawn row by row, then x_cts uniform on
/// [0, 1]^n, all from one Rng(seed) stream.
IlsInstance gen_ils(int n, std::uint64_t seed);

/// The objective ||A(x - x_cts)||^2 expanded into (A^T A, -2 A^T A x_cts, x_cts^T A^T A x_cts).
QcqpProblem ils_problem(const Eigen::MatrixXd& A, const Eigen::VectorXd& x_cts);

/// Max-cut over weights W as a 0-1 minimization: minimize z^T W z - (W 1)^T z
/// subject to z_i^2 - z_i = 0. The optimum is minus the max-cut value.
QcqpProblem maxcut_to_qcqp(const Eigen::MatrixXd& W);

/// Cut weight of the 0-1 vector z: (W 1)^T z - z^T W z.
double maxcut_value(const Eigen::MatrixXd& W, const Eigen::VectorXd& z);

/// W when the problem is exactly maxcut_to_qcqp(W) (before normalization).
std::optional<Eigen::MatrixXd> as_maxcut(const QcqpProblem& problem);

struct CutValueForms {
    double sign_form;  // (1/2) sum_{i<j} W_ij (1 - x_i x_j)
    double zero_one_form;  // (W 1)^T z - z^T W z at z = (x + 1)/2
};

/// Evaluates the cut weight of a +-1 vector both ways. Throws on entries other than +-1.
CutValueForms cut_value_identity_check(const Eigen::MatrixXd& W, const Eigen::VectorXd& x);

/// First line "n m", then m lines "i j w" with 1-based vertices and integer weights.
Eigen::MatrixXd parse_graph(std::istream& in);
Eigen::MatrixXd read_graph(const std::string& path);
void print_graph(std::ostream& out, const Eigen::MatrixXd& W);
void write_graph(const std::string& path, const Eigen::MatrixXd& W);

/// Each edge present with probability density, weight +1 or -1 equiprobably.
Eigen::MatrixXd gen_random_graph(int n, double density, std::uint64_t seed);

/// JSON problem schema:
///   {"n": int, "p": int,
///    "objective": {"P": [row-major n*n doubles], "q": [n doubles], "r": double},
///    "constraints": [{"P": ..., "q": ..., "r": ..., "sense": "leq" | "eq"}]}
std::string problem_to_json(const QcqpProblem& problem, int indent = 2);
QcqpProblem problem_from_json(const std::string& text);
QcqpProblem read_problem(const std::string& path);
void write_problem(const std::string& path, const QcqpProblem& problem);

/// The two-variable example min -||x||^2 s.t. ||x||^2 <= 1.2, x in Z^2.
QcqpProblem sphere_example();

}  // namespace miqcqp
