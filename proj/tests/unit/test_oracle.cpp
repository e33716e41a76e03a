#include "miqcqp/instances.hpp"
#include "miqcqp/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace miqcqp;
using namespace miqcqp::testing;

TEST_CASE("brute force examples") {
    const auto sphere = brute_force(sphere_example(), uniform_box(2, 2));
    CHECK(sphere.f_star == -1.0);
    std::set<std::pair<long long, long long>> pts;
    for (const auto& x : sphere.argmins) pts.insert({x(0), x(1)});
    CHECK(pts == std::set<std::pair<long long, long long>>{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});

    const auto one = brute_force(ils_1d(0.4), uniform_box(1, 3));
    CHECK(one.f_star == doctest::Approx(0.16));
    REQUIRE(one.argmins.size() == 1);
    CHECK(one.argmins[0](0) == 0);

    QcqpProblem infeasible(1, 1, QuadraticForm::zero(1));
    infeasible.add_constraint(QuadraticForm(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), 1.0));
    const auto none = brute_force(infeasible, uniform_box(1, 3));
    CHECK(std::isinf(none.f_star));
    CHECK(none.f_star > 0);
    CHECK(none.argmins.empty());
}

TEST_CASE("brute force guards") {
    CHECK(uniform_box(3, 1).volume() == 27.0);
    CHECK_THROWS_AS(brute_force(gen_ils(8, 1).problem, uniform_box(8, 10)), Error);
    QcqpProblem mixed(2, 1, QuadraticForm::zero(2));
    CHECK_THROWS_AS(brute_force(mixed, uniform_box(2, 1)), Error);
    CHECK_THROWS_AS(brute_force(sphere_example(), uniform_box(3, 1)), Error);
}

TEST_CASE("max-cut enumeration") {
    CHECK(brute_force_maxcut(triangle()).value == 2.0);
    CHECK(brute_force_maxcut(Eigen::MatrixXd::Zero(5, 5)).value == 0.0);
    Eigen::MatrixXd edge = Eigen::MatrixXd::Zero(2, 2);
    edge(0, 1) = edge(1, 0) = 1;
    CHECK(brute_force_maxcut(edge).value == 1.0);
    CHECK(brute_force_maxcut(Eigen::MatrixXd::Zero(0, 0)).value == 0.0);
    CHECK_THROWS_AS(brute_force_maxcut(Eigen::MatrixXd::Zero(23, 23)), Error);

    // Gray-code enumeration against plain enumeration of the 0-1 form.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const int n = 3 + static_cast<int>(seed % 6);
        const Eigen::MatrixXd W = gen_random_graph(n, 0.6, seed);
        const auto gray = brute_force_maxcut(W);
        CHECK(gray.z(0) == 1);
        CHECK(maxcut_value(W, gray.z) == gray.value);
        const auto plain = brute_force(maxcut_to_qcqp(W), IntBox{IntVector::Zero(n), IntVector::Ones(n)});
        CHECK(gray.value == doctest::Approx(-plain.f_star));
    }
}

TEST_CASE("ils_box") {
    const IntBox one = ils_box(Eigen::MatrixXd::Identity(1, 1), Eigen::VectorXd::Constant(1, 0.4));
    CHECK(one.lo(0) <= 0);
    CHECK(one.hi(0) >= 0);
    CHECK(one.lo(0) == -1);
    CHECK(one.hi(0) == 1);

    const Eigen::Vector3d c(2, -1, 0);
    const IntBox at = ils_box(Eigen::MatrixXd::Identity(3, 3), c);
    CHECK(at.lo == (c.array() - 1).matrix().cast<long long>());
    CHECK(at.hi == (c.array() + 1).matrix().cast<long long>());
    const auto bf = brute_force(ils_problem(Eigen::MatrixXd::Identity(3, 3), c), at);
    REQUIRE(bf.argmins.size() == 1);
    CHECK(bf.argmins[0] == c.cast<long long>());

    CHECK_THROWS_AS(ils_box(Eigen::MatrixXd::Zero(2, 2), Eigen::Vector2d::Zero()), Error);
}

TEST_CASE("ils_box contains the minimizers of a much larger box") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const IlsInstance inst = gen_ils(3, 600 + seed);
        const IntBox box = ils_box(inst.A, inst.x_cts);
        const IntBox same = ils_box(inst.problem);
        CHECK(same.lo == box.lo);
        CHECK(same.hi == box.hi);
        // The radius never exceeds the isotropic bound sqrt(U) / sigma_min + 1.
        const double U = evaluate(inst.problem.objective, inst.x_cts.array().round().matrix().eval());
        const double smin = Eigen::JacobiSVD<Eigen::MatrixXd>(inst.A).singularValues()(2);
        const double iso = std::sqrt(U) / smin + 1;
        for (int i = 0; i < 3; ++i) {
            CHECK(box.hi(i) <= std::floor(inst.x_cts(i) + iso));
            CHECK(box.lo(i) >= std::ceil(inst.x_cts(i) - iso));
        }
        const auto inner = brute_force(inst.problem, box);
        const auto outer_box = brute_force(inst.problem, IntBox{box.lo.array() - 4, box.hi.array() + 4});
        CHECK(inner.f_star == outer_box.f_star);
        CHECK(inner.argmins == outer_box.argmins);
    }
}
