#include "miqcqp/rounding.hpp"

#include "miqcqp/instances.hpp"
#include "miqcqp/parallel.hpp"
#include "miqcqp/rng.hpp"

#include <cmath>
#include <limits>

namespace miqcqp {

IntVector polish_integer(const QuadraticForm& f, IntVector x) {
    const Eigen::Index n = x.size();
    if (n != f.dim()) throw Error("polish_integer: dimension mismatch");
    Eigen::VectorXd xd = x.cast<double>();
    Eigen::VectorXd Px = f.P * xd;
    const long long max_moves = 1000LL * std::max<Eigen::Index>(n, 1);
    for (long long move = 0; move < max_moves; ++move) {
        const double fx = xd.dot(Px) + f.q.dot(xd) + f.r;
        const double threshold = -1e-12 * (1.0 + std::abs(fx));
        Eigen::Index best_i = -1;
        double best_step = 0.0, best_change = threshold;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double g = 2.0 * Px(i) + f.q(i);
            const double h = f.P(i, i);
            // f(x + s e_i) - f(x) = h s^2 + g s
            double step = h > 0.0 ? std::round(-g / (2.0 * h)) : (g > 0.0 ? -1.0 : 1.0);
            if (step == 0.0) continue;
            const double change = h * step * step + g * step;
            if (change < best_change) {
                best_change = change;
                best_step = step;
                best_i = i;
            }
        }
        if (best_i < 0) break;
        x(best_i) += static_cast<long long>(best_step);
        xd(best_i) += best_step;
        Px += best_step * f.P.col(best_i);
    }
    return x;
}

IlsRounding ils_round(const SdpSolution& solution, const QcqpProblem& problem, int samples, std::uint64_t seed,
                      int threads) {
    if (samples < 1) throw Error("ils_round: need at least one sample");
    if (problem.p != problem.n || !problem.constraints.empty())
        throw Error("ils_round: requires an unconstrained pure integer problem");
    const int n = problem.n;
    if (solution.x.size() != n || solution.X.rows() != n) throw Error("ils_round: solution dimension mismatch");

    const Eigen::MatrixXd M = solution.X - solution.x * solution.x.transpose();
    const Eigen::MatrixXd F = psd_factor(SymMatrixd(M));

    // Candidate 0 is round(x_hat); candidates 1..samples are Gaussian draws.
    std::vector<IntVector> points(static_cast<std::size_t>(samples) + 1);
    std::vector<double> values(points.size());
    parallel_for(samples + 1, threads, [&](int k) {
        Eigen::VectorXd y = solution.x;
        if (k > 0) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k - 1)));
            Eigen::VectorXd g(n);
            for (int i = 0; i < n; ++i) g(i) = rng.normal();
            y += F * g;
        }
        IntVector x = y.array().round().cast<long long>().matrix();
        x = polish_integer(problem.objective, std::move(x));
        values[static_cast<std::size_t>(k)] = evaluate(problem.objective, x);
        points[static_cast<std::size_t>(k)] = std::move(x);
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < points.size(); ++k)
        if (values[k] < values[best]) best = k;
    return {points[best], values[best]};
}

Eigen::MatrixXd sign_moment_matrix(const Eigen::MatrixXd& X, const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
    return 4.0 * X - 2.0 * x * ones.transpose() - 2.0 * ones * x.transpose() + ones * ones.transpose();
}

namespace {

/// Flips single vertices while some flip increases the cut; returns the cut value.
double polish_signs(const Eigen::MatrixXd& W, Eigen::VectorXd& s) {
    const Eigen::Index n = s.size();
    Eigen::VectorXd Ws = W * s;
    double cut = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) cut += 0.5 * W(i, j) * (1.0 - s(i) * s(j));
    for (Eigen::Index iter = 0; iter < 100 * std::max<Eigen::Index>(n, 1); ++iter) {
        Eigen::Index best_i = -1;
        double best_gain = 1e-12;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double gain = s(i) * Ws(i);
            if (gain > best_gain) {
                best_gain = gain;
                best_i = i;
            }
        }
        if (best_i < 0) break;
        cut += best_gain;
        Ws -= 2.0 * s(best_i) * W.col(best_i);
        s(best_i) = -s(best_i);
    }
    return cut;
}

}  // namespace

MaxCutRounding maxcut_round(const SdpSolution& solution, const Eigen::MatrixXd& W, int samples, std::uint64_t seed,
                            int threads) {
    if (samples < 1) throw Error("maxcut_round: need at least one sample");
    const Eigen::Index n = W.rows();
    if (W.cols() != n || solution.x.size() != n || solution.X.rows() != n)
        throw Error("maxcut_round: dimension mismatch");
    const Eigen::MatrixXd V = psd_factor(SymMatrixd(sign_moment_matrix(solution.X, solution.x)));

    std::vector<Eigen::VectorXd> signs(static_cast<std::size_t>(samples));
    std::vector<double> values(signs.size());
    parallel_for(samples, threads, [&](int k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        Eigen::VectorXd g(n);
        for (Eigen::Index i = 0; i < n; ++i) g(i) = rng.normal();
        const Eigen::VectorXd proj = V * g;
        Eigen::VectorXd s = (proj.array() >= 0.0).select(Eigen::VectorXd::Ones(n), -Eigen::VectorXd::Ones(n));
        values[static_cast<std::size_t>(k)] = polish_signs(W, s);
        signs[static_cast<std::size_t>(k)] = std::move(s);
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < signs.size(); ++k)
        if (values[k] > values[best]) best = k;
    MaxCutRounding out;
    out.z = (signs[best].array() + 1.0) / 2.0;
    out.value = maxcut_value(W, out.z);
    return out;
}

}  // namespace miqcqp
