#include "miqcqp/cuts.hpp"
#include "miqcqp/instances.hpp"
#include "miqcqp/oracle.hpp"
#include "miqcqp/sdp_solver.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace miqcqp;
using namespace miqcqp::testing;

namespace {

Cut unit_cut(int n, int i, long long b) {
    Cut c;
    c.a = IntVector::Zero(n);
    c.a(i) = 1;
    c.b = b;
    return c;
}

/// Checks the postconditions every OPTIMAL solve promises.
void check_optimal(const LiftedSdp& sdp, const SdpSolution& s, const SolverSettings& settings = {}) {
    REQUIRE(s.status == SdpStatus::Optimal);
    const int n = sdp.n;
    Eigen::MatrixXd Z(n + 1, n + 1);
    Z << s.X, s.x, s.x.transpose(), 1.0;
    CHECK(min_eigenvalue(SymMatrixd(Z)) >= -settings.feas_tol);
    REQUIRE(s.duals.size() == sdp.constraints.size());
    for (std::size_t i = 0; i < sdp.constraints.size(); ++i) {
        CHECK(s.duals[i] >= 0.0);
        const auto& c = sdp.constraints[i];
        const double scale = std::max(1.0, std::sqrt(c.P.squaredNorm() + c.q.squaredNorm() + c.r * c.r));
        CHECK(lifted_value(c, s.X, s.x) <= settings.feas_tol * scale * 10);
    }
    CHECK(std::abs(s.f_sdp - s.dual_objective) <= settings.rel_gap_tol * (1 + std::abs(s.f_sdp)) * 10);
    CHECK(s.f_sdp == doctest::Approx(lifted_objective(sdp, s.X, s.x)).epsilon(1e-6));
}

LiftedSdp lift_ils(int n, std::uint64_t seed, bool with_k1) {
    const IlsInstance inst = gen_ils(n, seed);
    std::vector<Cut> cuts;
    if (with_k1)
        for (int i = 0; i < n; ++i) cuts.push_back(unit_cut(n, i, 0));
    return lift(inst.problem, cuts);
}

}  // namespace

TEST_CASE("SolverSettings validation") {
    SolverSettings s;
    s.step_fraction = 1.0;
    CHECK_THROWS_AS(s.validate(), Error);
    s = {};
    s.rel_gap_tol = 0.0;
    CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("convex x^2 is tight at zero") {
    const LiftedSdp sdp = lift(QcqpProblem(1, 0, QuadraticForm(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), 0.0)));
    const SdpSolution s = solve(sdp);
    check_optimal(sdp, s);
    CHECK(std::abs(s.f_sdp) <= 1e-6);
    CHECK(std::abs(s.X(0, 0)) <= 1e-6);
    CHECK(std::abs(s.x(0)) <= 1e-4);
}

TEST_CASE("sphere example relaxation") {
    const LiftedSdp sdp = lift(sphere_example());
    const SdpSolution s = solve(sdp);
    check_optimal(sdp, s);
    CHECK(s.f_sdp == doctest::Approx(-1.2).epsilon(1e-6));
    CHECK((s.X - 0.6 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-5);
    CHECK(s.x.cwiseAbs().maxCoeff() <= 1e-5);
    CHECK(s.dual(sdp, Provenance::original(0)) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("1-D ILS with the cut x(x - 1) >= 0") {
    const LiftedSdp sdp = lift(ils_1d(0.4), {unit_cut(1, 0, 0)});
    const SdpSolution s = solve(sdp);
    check_optimal(sdp, s);
    CHECK(s.f_sdp == doctest::Approx(0.16).epsilon(1e-6));

    // Grid oracle over the lifted feasible set {X >= x^2, X >= x}.
    double best = 1e9;
    for (int i = -400; i <= 800; ++i) {
        const double x = i / 400.0;
        const double X = std::max(x * x, x);
        best = std::min(best, X - 0.8 * x + 0.16);
    }
    CHECK(s.f_sdp == doctest::Approx(best).epsilon(1e-5));
}

TEST_CASE("concave objective without constraints is unbounded") {
    const LiftedSdp sdp = lift(QcqpProblem(1, 0, QuadraticForm(-Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), 0.0)));
    CHECK(solve(sdp).status == SdpStatus::UnboundedBelow);
}

TEST_CASE("contradictory constraint is infeasible") {
    QcqpProblem p(1, 1, QuadraticForm(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), 0.0));
    p.add_constraint(QuadraticForm(Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), 1.0));
    CHECK(solve(lift(p)).status == SdpStatus::PrimalInfeasible);
}

TEST_CASE("equality constraints without a strict interior") {
    const QcqpProblem mc = normalize_equalities(maxcut_to_qcqp(triangle()));
    const LiftedSdp sdp = lift(mc);
    const SdpSolution s = solve(sdp);
    check_optimal(sdp, s);
    // The max-cut SDP bound of the triangle is 9/4.
    CHECK(s.f_sdp == doctest::Approx(-2.25).epsilon(1e-6));
    CHECK((s.X.diagonal() - s.x).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("resolve_perturbed examples") {
    const LiftedSdp sdp = lift(sphere_example());
    const SdpSolution base = solve(sdp);
    const SdpSolution same = resolve_perturbed(sdp, Provenance::original(0), 0.0);
    CHECK(same.f_sdp == doctest::Approx(base.f_sdp).epsilon(1e-7));
    const SdpSolution tighter = resolve_perturbed(sdp, Provenance::original(0), -0.2);
    CHECK(tighter.f_sdp == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK_THROWS_AS(resolve_perturbed(sdp, Provenance::cut(0), -0.1), Error);
}

TEST_CASE("weak duality at every iterate") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const LiftedSdp sdp = lift_ils(6, seed, true);
        const SdpSolution s = solve(sdp);
        check_optimal(sdp, s);
        for (double b : s.iterate_bounds) CHECK(b <= s.f_sdp + 1e-7 * (1 + std::abs(s.f_sdp)));
        REQUIRE(s.best_certified_bound);
        CHECK(*s.best_certified_bound <= s.f_sdp + 1e-7 * (1 + std::abs(s.f_sdp)));
    }
}

TEST_CASE("more cuts never lower the bound") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const IlsInstance inst = gen_ils(5, 100 + seed);
        std::vector<Cut> c1;
        for (int i = 0; i < 5; ++i) c1.push_back(unit_cut(5, i, 0));
        const SdpSolution s1 = solve(lift(inst.problem, c1));
        auto c2 = c1;
        const auto extra = enumerate_cuts(s1.X, s1.x, 5, 2, 1e-6, 10);
        c2.insert(c2.end(), extra.begin(), extra.end());
        const SdpSolution s2 = solve(lift(inst.problem, c2));
        CHECK(s2.f_sdp >= s1.f_sdp - 2e-7 * (1 + std::abs(s1.f_sdp)));
    }
}

TEST_CASE("relaxation bound never exceeds a lattice point value") {
    Rng rng(8);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const IlsInstance inst = gen_ils(4, 200 + seed);
        std::vector<Cut> cuts;
        for (int i = 0; i < 4; ++i) cuts.push_back(unit_cut(4, i, 0));
        const SdpSolution s = solve(lift(inst.problem, cuts));
        const auto bf = brute_force(inst.problem, ils_box(inst.A, inst.x_cts));
        CHECK(s.f_sdp <= bf.f_star + 1e-7);
        for (int k = 0; k < 20; ++k) {
            Eigen::VectorXd x(4);
            for (int i = 0; i < 4; ++i) x(i) = static_cast<double>(random_int(rng, -3, 3));
            CHECK(s.f_sdp <= evaluate(inst.problem.objective, x) + 1e-7);
        }
    }
}

TEST_CASE("sensitivity inequality for active constraints") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const LiftedSdp sdp = lift_ils(4, 300 + seed, true);
        const SdpSolution s = solve(sdp);
        REQUIRE(s.ok());
        for (std::size_t i = 0; i < sdp.constraints.size(); ++i) {
            const double lam = s.duals[i];
            if (lam <= 1e-6) continue;
            for (double u : {0.1, -0.1, 0.01, -0.01}) {
                const SdpSolution t = resolve_perturbed(sdp, sdp.constraints[i].tag, u);
                if (t.status == SdpStatus::PrimalInfeasible) continue;
                CHECK(t.f_sdp >= s.f_sdp - lam * u - 1e-5);
            }
        }
    }
}

TEST_CASE("duals follow the unscaled constraint convention") {
    LiftedSdp sdp = lift(sphere_example());
    const double before = solve(sdp).duals[0];
    sdp.constraints[0].P *= 4.0;
    sdp.constraints[0].q *= 4.0;
    sdp.constraints[0].r *= 4.0;
    const double after = solve(sdp).duals[0];
    CHECK(after == doctest::Approx(before / 4.0).epsilon(1e-5));
}
