#include "miqcqp/cut_loop.hpp"

#include "miqcqp/rng.hpp"

#include <chrono>
#include <set>

namespace miqcqp {

std::string to_string(CutStrategy strategy) {
    switch (strategy) {
        case CutStrategy::EnumK1: return "enum1";
        case CutStrategy::EnumK2: return "enum2";
        case CutStrategy::EnumK3: return "enum3";
        case CutStrategy::Eig: return "eig";
        case CutStrategy::Random3: return "random3";
        case CutStrategy::Combined: return "combined";
    }
    return "?";
}

std::optional<CutStrategy> parse_strategy(const std::string& name) {
    for (auto s : {CutStrategy::EnumK1, CutStrategy::EnumK2, CutStrategy::EnumK3, CutStrategy::Eig,
                   CutStrategy::Random3, CutStrategy::Combined})
        if (to_string(s) == name) return s;
    return std::nullopt;
}

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::NoNewCuts: return "no_new_cuts";
        case StopReason::MaxRounds: return "max_rounds";
        case StopReason::NoCutCertified: return "no_cut_certified";
        case StopReason::SolverFailure: return "solver_failure";
    }
    return "?";
}

void CutLoopConfig::validate() const {
    if (max_rounds < 1) throw Error("CutLoopConfig: max_rounds must be at least 1");
    if (!(eps >= 0.0)) throw Error("CutLoopConfig: eps must be nonnegative");
    if (random_count < 0) throw Error("CutLoopConfig: random_count must be nonnegative");
    solver.validate();
}

std::vector<Cut> baseline_k1_cuts(int n, int p) {
    std::vector<Cut> cuts;
    for (int i = 0; i < p; ++i) {
        Cut c;
        c.a = IntVector::Zero(n);
        c.a(i) = 1;
        c.b = 0;
        cuts.push_back(std::move(c));
    }
    return cuts;
}

CutBatch generate_cuts(CutStrategy strategy, const Eigen::MatrixXd& X, const Eigen::VectorXd& x, int p,
                       const CutLoopConfig& config, int round) {
    CutBatch batch;
    if (p == 0) {
        batch.no_cut_certified = true;
        return batch;
    }
    const EigCutResult eig = eig_cut(X, x, p, config.eig);
    batch.lambda_min = eig.lambda_min;
    if (eig.no_cut_certified) {
        batch.no_cut_certified = true;
        return batch;
    }
    const double eps = config.eps;
    auto random3 = [&] {
        return random_cuts(X, x, p, config.random_count, std::min(3, p), eps,
                           derive_seed(config.seed, static_cast<std::uint64_t>(round)));
    };
    switch (strategy) {
        case CutStrategy::EnumK1: batch.cuts = enumerate_cuts(X, x, p, 1, eps, -1); break;
        case CutStrategy::EnumK2: batch.cuts = enumerate_cuts(X, x, p, 2, eps, -1); break;
        case CutStrategy::EnumK3: batch.cuts = enumerate_cuts(X, x, p, 3, eps, -1); break;
        case CutStrategy::Eig: batch.cuts = eig.cuts; break;
        case CutStrategy::Random3: batch.cuts = random3(); break;
        case CutStrategy::Combined: {
            std::vector<Cut> pool = enumerate_cuts(X, x, p, 2, eps, -1);
            pool.insert(pool.end(), eig.cuts.begin(), eig.cuts.end());
            const auto rnd = random3();
            pool.insert(pool.end(), rnd.begin(), rnd.end());
            batch.cuts = rank_cuts(std::move(pool), X, x, eps, -1);
            break;
        }
    }
    return batch;
}

std::optional<DualCertificate> certify(const SdpSolution& solution, const LiftedSdp& lift, double tol) {
    if (solution.status != SdpStatus::Optimal && solution.status != SdpStatus::MaxIters) return std::nullopt;
    try {
        return extract_certificate(solution, lift, tol);
    } catch (const CannotCertify&) {
        return std::nullopt;
    }
}

TightenReport tighten(const QcqpProblem& input, const CutLoopConfig& config) {
    config.validate();
    const QcqpProblem problem = normalize_equalities(input);
    const int n = problem.n;
    const int cap = config.cap < 0 ? 4 * n : config.cap;

    TightenReport report;
    std::set<Cut> pool;
    if (config.baseline_k1_fixed) {
        report.cuts = baseline_k1_cuts(n, problem.p);
        pool.insert(report.cuts.begin(), report.cuts.end());
    }
    report.lift = lift(problem, report.cuts);

    using Clock = std::chrono::steady_clock;
    auto start = Clock::now();
    int added = 0;
    for (int round = 0;; ++round) {
        report.solution = solve(report.lift, config.solver);
        report.certificate = certify(report.solution, report.lift);
        report.certified_bound.reset();
        if (report.certificate) report.certified_bound = dual_objective(report.lift, *report.certificate);

        RoundRecord rec;
        rec.round = round;
        rec.f_sdp = report.solution.f_sdp;
        rec.certified_bound = report.certified_bound;
        rec.certificate = report.certificate;
        rec.cuts_added = added;
        rec.cuts_total = static_cast<int>(report.cuts.size());
        rec.iterations = report.solution.iterations;
        rec.status = report.solution.status;

        auto finish = [&](StopReason reason) {
            rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            report.rounds.push_back(rec);
            report.stop = reason;
        };
        const auto status = report.solution.status;
        if (status == SdpStatus::PrimalInfeasible || status == SdpStatus::UnboundedBelow) {
            finish(StopReason::SolverFailure);
            break;
        }
        if (round == config.max_rounds) {
            finish(StopReason::MaxRounds);
            break;
        }

        CutBatch batch = generate_cuts(config.strategy, report.solution.X, report.solution.x, problem.p, config,
                                       round);
        if (batch.no_cut_certified) {
            finish(StopReason::NoCutCertified);
            break;
        }
        std::vector<Cut> fresh;
        for (auto& c : batch.cuts) {
            if (static_cast<int>(fresh.size()) >= cap) break;
            if (pool.insert(c).second) fresh.push_back(std::move(c));
        }
        if (fresh.empty()) {
            finish(StopReason::NoNewCuts);
            break;
        }
        finish(StopReason::NoNewCuts);
        added = static_cast<int>(fresh.size());
        for (auto& c : fresh) {
            report.lift.add(lift_cut(c, static_cast<int>(report.cuts.size())));
            report.cuts.push_back(std::move(c));
        }
        start = Clock::now();
    }
    return report;
}

}  // namespace miqcqp
