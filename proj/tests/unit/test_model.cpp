#include "miqcqp/cuts.hpp"
#include "miqcqp/instances.hpp"
#include "miqcqp/lifted.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace miqcqp;
using namespace miqcqp::testing;

TEST_CASE("evaluate examples") {
    const QuadraticForm c(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(2), 3.0);
    CHECK(evaluate(c, Eigen::Vector2d(7.0, -1.0)) == 3.0);

    const IlsInstance ils = gen_ils(5, 3);
    CHECK(std::abs(evaluate(ils.problem.objective, ils.x_cts)) <= 1e-10);

    // Weight of the triangle cut {1,2} | {3} in the +-1 form sum_{i<j} (1 - x_i x_j) / 2.
    const Eigen::MatrixXd W = triangle();
    const QuadraticForm sign_form(-0.25 * W, Eigen::VectorXd::Zero(3), 0.25 * W.sum());
    CHECK(evaluate(sign_form, Eigen::Vector3d(1, 1, -1)) == doctest::Approx(2.0));
    double best = -1;
    for (int m = 0; m < 8; ++m) {
        const Eigen::Vector3d x(m & 1 ? 1 : -1, m & 2 ? 1 : -1, m & 4 ? 1 : -1);
        best = std::max(best, evaluate(sign_form, x));
    }
    CHECK(best == doctest::Approx(2.0));

    CHECK_THROWS_AS(evaluate(c, Eigen::Vector3d::Zero()), Error);
}

TEST_CASE("QuadraticForm symmetrizes P") {
    Eigen::MatrixXd P(2, 2);
    P << 1, 4, 0, 1;
    const QuadraticForm f(P, Eigen::VectorXd::Zero(2), 0.0);
    CHECK(f.P(0, 1) == 2.0);
    CHECK(f.P(1, 0) == 2.0);
    const Eigen::Vector2d x(0.3, -1.7);
    CHECK(evaluate(f, x) == doctest::Approx(x.dot(P * x)));
    CHECK_THROWS_AS(QuadraticForm(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Zero(3), 0.0), Error);
}

TEST_CASE("QcqpProblem validation") {
    CHECK_THROWS_AS(QcqpProblem(2, 3, QuadraticForm::zero(2)), Error);
    CHECK_THROWS_AS(QcqpProblem(2, 1, QuadraticForm::zero(3)), Error);
    QcqpProblem ok(2, 1, QuadraticForm::zero(2));
    CHECK_THROWS_AS(ok.add_constraint(QuadraticForm::zero(3)), Error);
}

TEST_CASE("normalize_equalities") {
    const QcqpProblem none(2, 2, QuadraticForm::zero(2));
    const QcqpProblem same = normalize_equalities(none);
    CHECK(same.constraints.empty());
    CHECK(same.is_normalized());

    QcqpProblem one(1, 1, QuadraticForm::zero(1));
    one.add_constraint(QuadraticForm(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Constant(1, -1.0), 0.5),
                       Sense::Eq);
    const QcqpProblem split = normalize_equalities(one);
    REQUIRE(split.constraints.size() == 2);
    CHECK(split.constraints[0].sense == Sense::Leq);
    CHECK(split.constraints[1].sense == Sense::Leq);
    CHECK(split.constraints[1].form.P(0, 0) == -1.0);
    CHECK(split.constraints[1].form.q(0) == 1.0);
    CHECK(split.constraints[1].form.r == -0.5);

    const QcqpProblem mc = normalize_equalities(maxcut_to_qcqp(triangle()));
    CHECK(mc.constraints.size() == 6);

    const QcqpProblem twice = normalize_equalities(split);
    CHECK(twice.constraints.size() == split.constraints.size());
}

TEST_CASE("lift examples") {
    const LiftedSdp empty = lift(QcqpProblem(3, 3, QuadraticForm::zero(3)));
    CHECK(empty.constraints.empty());
    CHECK(empty.n == 3);

    const LiftedSdp sphere = lift(sphere_example());
    CHECK(sphere.P0.isApprox(-Eigen::MatrixXd::Identity(2, 2)));
    REQUIRE(sphere.constraints.size() == 1);
    CHECK(sphere.constraints[0].P.isApprox(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(sphere.constraints[0].r == doctest::Approx(-1.2));
    CHECK(sphere.constraints[0].tag == Provenance::original(0));

    Cut cut;
    cut.a = IntVector::Ones(2);
    cut.b = 0;
    const LiftedConstraint lc = lift_cut(cut, 0);
    CHECK(lc.P.isApprox(-Eigen::MatrixXd::Ones(2, 2)));
    CHECK(lc.q.isApprox(Eigen::VectorXd::Ones(2)));
    CHECK(lc.r == 0.0);
    CHECK(lc.tag == Provenance::cut(0));
}

TEST_CASE("LiftedSdp rejects repeated tags") {
    LiftedSdp sdp = lift(sphere_example());
    LiftedConstraint dup = sdp.constraints[0];
    sdp.constraints.push_back(dup);
    CHECK_THROWS_AS(sdp.validate(), Error);
    CHECK(sdp.find(Provenance::cut(3)) == -1);
}

TEST_CASE("lattice points satisfy every lifted constraint and keep the objective") {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(n + 1)));
        Eigen::VectorXd x = random_vector(rng, n, -3.0, 3.0);
        for (int i = 0; i < p; ++i) x(i) = std::round(x(i));

        QcqpProblem problem(n, p, QuadraticForm(random_symmetric(rng, n), random_vector(rng, n, -1, 1), rng.normal()));
        // Constraints made feasible at x by shifting their constant.
        for (int k = 0; k < 3; ++k) {
            QuadraticForm f(random_symmetric(rng, n), random_vector(rng, n, -1, 1), 0.0);
            f.r = -evaluate(f, x) - rng.uniform();
            problem.add_constraint(f);
        }
        std::vector<Cut> cuts;
        for (int k = 0; k < 5 && p > 0; ++k) {
            Cut c;
            c.a = IntVector::Zero(n);
            for (int i = 0; i < p; ++i) c.a(i) = random_int(rng, -2, 2);
            if ((c.a.array() == 0).all()) c.a(0) = 1;
            c.b = random_int(rng, -4, 4);
            cuts.push_back(c);
        }
        const LiftedSdp sdp = lift(problem, cuts);
        const Eigen::MatrixXd X = outer(x);
        for (const auto& c : sdp.constraints) CHECK(lifted_value(c, X, x) <= 1e-9);
        CHECK(lifted_objective(sdp, X, x) == doctest::Approx(evaluate(problem.objective, x)));
    }
}

TEST_CASE("with_box and permute_integers_first") {
    const QcqpProblem base(2, 2, QuadraticForm::zero(2));
    const QcqpProblem boxed = with_box(base, Eigen::Vector2d(-1, -1), Eigen::Vector2d(2, 2));
    CHECK(boxed.constraints.size() == 2);
    CHECK(is_feasible(boxed, Eigen::Vector2d(2, -1), 1e-9));
    CHECK_FALSE(is_feasible(boxed, Eigen::Vector2d(3, 0), 1e-9));
    CHECK_FALSE(is_feasible(boxed, Eigen::Vector2d(0.5, 0), 1e-9));

    Eigen::MatrixXd P(3, 3);
    P << 1, 2, 3, 2, 4, 5, 3, 5, 6;
    const QcqpProblem mixed(3, 0, QuadraticForm(P, Eigen::Vector3d(1, 2, 3), 0.0));
    std::vector<int> perm;
    const QcqpProblem moved = permute_integers_first(mixed, {2}, &perm);
    CHECK(moved.p == 1);
    CHECK(perm[0] == 2);
    const Eigen::Vector3d x(0.1, 0.2, 0.3);
    Eigen::Vector3d y;
    for (int k = 0; k < 3; ++k) y(k) = x(perm[static_cast<std::size_t>(k)]);
    CHECK(evaluate(moved.objective, y) == doctest::Approx(evaluate(mixed.objective, x)));
}
