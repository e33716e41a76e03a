#include "miqcqp/cuts.hpp"
#include "miqcqp/sdp_solver.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace miqcqp;
using namespace miqcqp::testing;

namespace {

Cut make_cut(std::initializer_list<long long> a, long long b) {
    Cut c;
    c.a = IntVector(static_cast<Eigen::Index>(a.size()));
    Eigen::Index i = 0;
    for (long long v : a) c.a(i++) = v;
    c.b = b;
    return c;
}

IntVector random_a(Rng& rng, int n, int p) {
    IntVector a = IntVector::Zero(n);
    while ((a.array() == 0).all())
        for (int i = 0; i < p; ++i) a(i) = random_int(rng, -3, 3);
    return a;
}

}  // namespace

TEST_CASE("canonical sign and ordering") {
    const Cut c = make_cut({0, -2, 1}, 3).canonical();
    CHECK(c.a == make_cut({0, 2, -1}, 0).a);
    CHECK(c.b == -4);
    CHECK(c.is_canonical());
    CHECK(make_cut({1, -1}, 0) < make_cut({1, 0}, 0));
    CHECK(make_cut({1, 0}, 0) < make_cut({1, 0}, 1));
    CHECK_THROWS_AS(check_cut(make_cut({0, 0}, 0), 2, 2), Error);
    CHECK_THROWS_AS(check_cut(make_cut({1, 1}, 0), 2, 1), Error);
    CHECK_NOTHROW(check_cut(make_cut({1, 0}, 0), 2, 1));
}

TEST_CASE("violation examples") {
    const Eigen::Vector2d xi(2.0, -1.0);
    for (const auto& a : {make_cut({1, 1}, 0).a, make_cut({2, -3}, 0).a}) {
        Cut c;
        c.a = a;
        c.b = static_cast<long long>(std::llround(a.cast<double>().dot(xi)));
        CHECK(violation(c, outer(xi), xi) == doctest::Approx(0.0));
    }
    const Eigen::Vector2d h(0.5, 0.0);
    CHECK(violation(make_cut({1, 0}, 0), outer(h), h) == doctest::Approx(0.25));

    const Eigen::MatrixXd X = 0.6 * Eigen::MatrixXd::Identity(2, 2);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
    for (int a0 = -2; a0 <= 2; ++a0)
        for (int a1 = -2; a1 <= 2; ++a1)
            for (int b = -3; b <= 3; ++b) {
                const Cut c = make_cut({a0, a1}, b);
                const double expected = -0.6 * (a0 * a0 + a1 * a1) - b * (b + 1.0);
                CHECK(violation(c, X, zero) == doctest::Approx(expected));
                CHECK(violation(c, X, zero) <= 0.0);
            }
}

TEST_CASE("best_b examples") {
    const IntVector a = make_cut({1}, 0).a;
    const auto v = [&](double x, long long b) {
        Cut c;
        c.a = a;
        c.b = b;
        const Eigen::VectorXd xv = Eigen::VectorXd::Constant(1, x);
        return violation(c, outer(xv), xv);
    };
    CHECK(best_b(a, Eigen::VectorXd::Constant(1, 0.4)) == 0);
    CHECK(v(0.4, 0) > v(0.4, -1));
    CHECK(v(0.4, 0) > v(0.4, 1));
    CHECK(best_b(a, Eigen::VectorXd::Constant(1, 3.0)) == 3);
    CHECK(v(3.0, 3) == doctest::Approx(v(3.0, 2)));
    CHECK(best_b(a, Eigen::VectorXd::Constant(1, -0.2)) == -1);
}

TEST_CASE("best_b maximizes violation over a window") {
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const Eigen::VectorXd x = random_vector(rng, n, -4, 4);
        const Eigen::MatrixXd X = outer(x) + random_psd(rng, n, 0.0, 0.5);
        Cut c;
        c.a = random_a(rng, n, n);
        c.b = best_b(c.a, x);
        const double best = violation(c, X, x);
        const long long centre = c.b;
        for (long long b = centre - 5; b <= centre + 5; ++b) {
            Cut other = c;
            other.b = b;
            CHECK(violation(other, X, x) <= best + 1e-12);
        }
    }
}

TEST_CASE("enumerate_cuts examples") {
    const Eigen::MatrixXd X = 0.6 * Eigen::MatrixXd::Identity(2, 2);
    for (int k = 1; k <= 3; ++k) CHECK(enumerate_cuts(X, Eigen::VectorXd::Zero(2), 2, k, 1e-6, -1).empty());

    const Eigen::Vector2d h(0.5, 0.0);
    const auto k1 = enumerate_cuts(outer(h), h, 2, 1, 1e-6, -1);
    REQUIRE_FALSE(k1.empty());
    CHECK(k1.front() == make_cut({1, 0}, 0));
    CHECK(violation(k1.front(), outer(h), h) == doctest::Approx(0.25));

    // With eps below zero every candidate direction survives, exposing the a-set.
    const Eigen::Vector2d y(0.3, 0.7);
    std::set<std::vector<long long>> dirs;
    for (const auto& c : enumerate_cuts(outer(y), y, 2, 2, -1e9, -1)) {
        CHECK(c.is_canonical());
        dirs.insert({c.a(0), c.a(1)});
    }
    CHECK(dirs == std::set<std::vector<long long>>{{1, 0}, {0, 1}, {1, 1}, {1, -1}});

    const auto capped = enumerate_cuts(outer(y), y, 2, 2, -1e9, 2);
    CHECK(capped.size() == 2);
}

TEST_CASE("enumerate_cuts respects continuous coordinates") {
    const Eigen::Vector3d x(0.5, 0.5, 0.5);
    for (const auto& c : enumerate_cuts(outer(x), x, 3, 3, 1e-6, -1) ) CHECK(c.a.size() == 3);
    for (const auto& c : enumerate_cuts(outer(x), x, 1, 3, 1e-6, -1)) {
        CHECK(c.a(1) == 0);
        CHECK(c.a(2) == 0);
    }
}

TEST_CASE("eig_cut examples") {
    const auto sphere = eig_cut(0.6 * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 2);
    CHECK(sphere.no_cut_certified);
    CHECK(sphere.lambda_min == doctest::Approx(0.6));
    CHECK(sphere.cuts.empty());

    const Eigen::Vector2d h(0.5, 0.0);
    const auto half = eig_cut(outer(h), h, 2);
    CHECK_FALSE(half.no_cut_certified);
    bool has_e1 = false;
    for (const auto& c : half.cuts) has_e1 = has_e1 || c == make_cut({1, 0}, 0);
    CHECK(has_e1);

    const Eigen::Vector3d integral(1, -2, 0);
    const auto none = eig_cut(outer(integral), integral, 3);
    CHECK_FALSE(none.no_cut_certified);
    CHECK(none.cuts.empty());
}

TEST_CASE("eig_cut certificate implies no enumerated cut") {
    Rng rng(44);
    int certified = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const int p = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const Eigen::VectorXd x = random_vector(rng, n, -3, 3);
        const Eigen::MatrixXd X = outer(x) + random_psd(rng, n, 0.1, 1.0);
        const auto e = eig_cut(X, x, p);
        if (!e.no_cut_certified) continue;
        ++certified;
        for (int k = 1; k <= 3; ++k) CHECK(enumerate_cuts(X, x, p, k, 1e-6, -1).empty());
    }
    CHECK(certified > 20);
}

TEST_CASE("violation is bounded by the slack matrix") {
    Rng rng(45);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(6));
        const Eigen::VectorXd x = random_vector(rng, n, -3, 3);
        const Eigen::MatrixXd M = random_psd(rng, n, 0.0, 0.6);
        const Eigen::MatrixXd X = outer(x) + M;
        CHECK((slack_matrix(X, x, n) - M).cwiseAbs().maxCoeff() <= 1e-12);
        Cut c;
        c.a = random_a(rng, n, n);
        const Eigen::VectorXd ad = c.a_double();
        for (long long b = best_b(c.a, x) - 2; b <= best_b(c.a, x) + 2; ++b) {
            c.b = b;
            CHECK(violation(c, X, x) <= -ad.dot(M * ad) + 0.25 + 1e-9);
        }
    }
}

TEST_CASE("random_cuts") {
    const Eigen::Vector3d x(0.5, 0.3, 0.8);
    const Eigen::MatrixXd X = outer(x);
    CHECK(random_cuts(X, x, 3, 0, 3, 1e-6, 1).empty());
    CHECK(random_cuts(0.6 * Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 2, 500, 2, 1e-6, 9).empty());
    const auto a = random_cuts(X, x, 3, 200, 2, 1e-6, 12);
    const auto b = random_cuts(X, x, 3, 200, 2, 1e-6, 12);
    CHECK(a == b);
    REQUIRE_FALSE(a.empty());
    for (const auto& c : a) {
        CHECK(c.is_canonical());
        CHECK((c.a.array() != 0).count() == 2);
        CHECK(violation(c, X, x) > 1e-6);
    }
}

TEST_CASE("sphere cut") {
    const LiftedConstraint one = sphere_cut_lifted(1, 1);
    const LiftedConstraint e1 = lift_cut(make_cut({1}, 0), 0);
    CHECK(one.P.isApprox(e1.P));
    CHECK(one.q.isApprox(e1.q));
    CHECK(one.r == e1.r);

    const LiftedConstraint s = sphere_cut_lifted(3, 3);
    for (int m = 0; m < 8; ++m) {
        const Eigen::Vector3d z(m & 1, (m >> 1) & 1, (m >> 2) & 1);
        CHECK(lifted_value(s, outer(z), z) == doctest::Approx(0.0));
    }
    const Eigen::Vector2d centre(0.5, 0.5);
    CHECK(lifted_value(sphere_cut_lifted(2, 2), outer(centre), centre) == doctest::Approx(0.5));
    CHECK_THROWS_AS(sphere_cut_lifted(3, 2), Error);
}

TEST_CASE("adding a returned cut never lowers the bound") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const IlsInstance inst = gen_ils(4, 500 + seed);
        LiftedSdp sdp = lift(inst.problem);
        const SdpSolution s = solve(sdp);
        const auto cuts = enumerate_cuts(s.X, s.x, 4, 2, 1e-6, 4);
        for (std::size_t k = 0; k < cuts.size(); ++k) {
            LiftedSdp more = sdp;
            more.add(lift_cut(cuts[k], static_cast<int>(k)));
            CHECK(solve(more).f_sdp >= s.f_sdp - 2e-7 * (1 + std::abs(s.f_sdp)));
        }
    }
}
