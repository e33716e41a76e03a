#include "miqcqp/bnc.hpp"

#include "miqcqp/parallel.hpp"
#include "miqcqp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

namespace miqcqp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void BncConfig::validate() const {
    if (max_nodes < 1) throw Error("BncConfig: max_nodes must be at least 1");
    if (root_cut_rounds < 0 || node_cut_rounds < 0) throw Error("BncConfig: cut rounds must be nonnegative");
    if (!(integrality_tol > 0.0 && integrality_tol < 0.5)) throw Error("BncConfig: integrality_tol must lie in (0, 0.5)");
    if (!(fathom_tol >= 0.0)) throw Error("BncConfig: fathom_tol must be nonnegative");
    if (threads < 1) throw Error("BncConfig: threads must be at least 1");
    solver.validate();
}

std::string to_string(BncStatus status) {
    switch (status) {
        case BncStatus::Optimal: return "OPTIMAL";
        case BncStatus::NodeLimit: return "NODE_LIMIT";
        case BncStatus::Infeasible: return "INFEASIBLE";
    }
    return "?";
}

std::optional<BranchChoice> select_branching(const SdpSolution& solution, const LiftedSdp& lift,
                                             const BncConfig& config,
                                             const std::function<bool(const IntVector&, long long)>& admissible) {
    auto ok = [&](const IntVector& c, long long d) { return !admissible || admissible(c, d); };

    if (config.branching == Branching::DualCut) {
        std::vector<int> order;
        for (std::size_t i = 0; i < lift.constraints.size(); ++i)
            if (lift.constraints[i].cut && i < solution.duals.size() && solution.duals[i] > 1e-6)
                order.push_back(static_cast<int>(i));
        std::sort(order.begin(), order.end(), [&](int l, int r) {
            const double dl = solution.duals[static_cast<std::size_t>(l)];
            const double dr = solution.duals[static_cast<std::size_t>(r)];
            if (dl != dr) return dl > dr;
            return *lift.constraints[static_cast<std::size_t>(l)].cut < *lift.constraints[static_cast<std::size_t>(r)].cut;
        });
        for (int i : order) {
            const Cut& cut = *lift.constraints[static_cast<std::size_t>(i)].cut;
            if (ok(cut.a, cut.b)) return BranchChoice{cut.a, cut.b, i};
        }
    }

    const Eigen::Index n = solution.x.size();
    std::vector<std::pair<double, Eigen::Index>> frac;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dist = std::abs(solution.x(i) - std::round(solution.x(i)));
        if (dist > config.integrality_tol) frac.emplace_back(dist, i);
    }
    std::stable_sort(frac.begin(), frac.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    for (const auto& [dist, i] : frac) {
        IntVector c = IntVector::Zero(n);
        c(i) = 1;
        const auto d = static_cast<long long>(std::floor(solution.x(i)));
        if (ok(c, d)) return BranchChoice{std::move(c), d, std::nullopt};
    }
    return std::nullopt;
}

std::optional<Incumbent> try_incumbent(const SdpSolution& solution, const QcqpProblem& problem, double tol) {
    if (solution.x.size() != problem.n || !solution.x.allFinite()) return std::nullopt;
    Incumbent inc;
    inc.x = solution.x.array().round().cast<long long>().matrix();
    const Eigen::VectorXd xd = inc.x.cast<double>();
    if (!is_feasible(problem, xd, tol)) return std::nullopt;
    inc.value = evaluate(problem.objective, xd);
    return inc;
}

bool objective_is_integral(const QcqpProblem& problem) {
    auto integral = [](double v) { return std::isfinite(v) && v == std::round(v); };
    const auto& f = problem.objective;
    // Off-diagonal pairs contribute 2 P_ij x_i x_j, so half-integers are enough there.
    for (Eigen::Index i = 0; i < f.P.rows(); ++i)
        for (Eigen::Index j = 0; j < f.P.cols(); ++j)
            if (!integral(i == j ? f.P(i, j) : 2.0 * f.P(i, j))) return false;
    return f.q.unaryExpr(integral).all() && integral(f.r);
}

namespace {

/// Integer interval for c^T x accumulated by branching; absent ends are unbounded.
struct Direction {
    IntVector c;
    std::optional<long long> lo;
    std::optional<long long> hi;

    bool splits(long long d) const { return (!lo || d >= *lo) && (!hi || d < *hi); }
};

struct Node {
    int id = 0;
    int depth = 0;
    double bound = -kInf;
    std::vector<Cut> cuts;
    std::vector<Direction> dirs;
};

struct Evaluation {
    SdpSolution solution;
    LiftedSdp lift;
    std::vector<Cut> cuts;
    double bound = -kInf;
    bool certified = false;
    bool infeasible = false;
    std::optional<Incumbent> incumbent;
};

LiftedConstraint product_row(const IntVector& c, long long lo, long long hi, int id, double sign) {
    const Eigen::VectorXd cd = c.cast<double>();
    LiftedConstraint row;
    row.P = sign * cd * cd.transpose();
    row.q = -sign * static_cast<double>(lo + hi) * cd;
    row.r = sign * static_cast<double>(lo) * static_cast<double>(hi);
    row.tag = Provenance::branch(id);
    return row;
}

LiftedSdp node_lift(const QcqpProblem& problem, const Node& node) {
    LiftedSdp sdp = lift(problem, node.cuts);
    for (std::size_t k = 0; k < node.dirs.size(); ++k) {
        const Direction& dir = node.dirs[k];
        const int base = 4 * static_cast<int>(k);
        if (dir.hi) sdp.add(lift_branch(dir.c, *dir.hi, 0, base));
        if (dir.lo) sdp.add(lift_branch(dir.c, *dir.lo - 1, 1, base + 1));
        if (dir.lo && dir.hi) {
            // (c^T x - lo)(c^T x - hi) <= 0; an equality when the interval is a single point.
            sdp.add(product_row(dir.c, *dir.lo, *dir.hi, base + 2, 1.0));
            if (*dir.lo == *dir.hi) sdp.add(product_row(dir.c, *dir.lo, *dir.hi, base + 3, -1.0));
        }
    }
    return sdp;
}

class Solver {
public:
    Solver(const QcqpProblem& problem, const BncConfig& config)
        : problem_(normalize_equalities(problem)), config_(config) {
        integral_ = config.use_integral_objective && objective_is_integral(problem_);
        cut_config_.strategy = config.cut_strategy;
        cut_config_.random_count = config.random_count;
        cut_config_.solver = config.solver;
    }

    BncResult run();

private:
    double tolerance(double f) const { return config_.fathom_tol * (1.0 + std::abs(f)); }

    bool fathomable(double bound, double fstar) const {
        if (!std::isfinite(fstar)) return false;
        if (integral_) return bound > fstar - 1.0 + tolerance(fstar);
        return bound >= fstar - tolerance(fstar);
    }

    void consider(std::optional<Incumbent>& best, std::optional<Incumbent> cand) const {
        if (cand && (!best || cand->value < best->value)) best = std::move(cand);
    }

    Evaluation evaluate_node(const Node& node, double fstar) const;
    void refresh(Evaluation& ev, double parent_bound) const;
    std::vector<Node> branch(const Node& node, const Evaluation& ev, int& next_id) const;

    QcqpProblem problem_;
    BncConfig config_;
    CutLoopConfig cut_config_;
    bool integral_ = false;
};

void Solver::refresh(Evaluation& ev, double parent_bound) const {
    ev.solution = solve(ev.lift, config_.solver);
    if (ev.solution.status == SdpStatus::UnboundedBelow)
        throw Error("branch_and_cut: node relaxation is unbounded below; supply a box");
    if (ev.solution.status == SdpStatus::PrimalInfeasible) {
        ev.infeasible = true;
        ev.bound = kInf;
        ev.certified = true;
        return;
    }
    const auto cert = certify(ev.solution, ev.lift);
    if (cert && config_.on_certificate) config_.on_certificate(ev.lift, ev.solution, *cert);
    if (cert) {
        ev.bound = std::max({ev.bound, parent_bound, dual_objective(ev.lift, *cert)});
        ev.certified = true;
    } else {
        ev.bound = std::max(ev.bound, parent_bound);
    }
    consider(ev.incumbent, try_incumbent(ev.solution, problem_, 1e-9));
}

Evaluation Solver::evaluate_node(const Node& node, double fstar) const {
    Evaluation ev;
    ev.cuts = node.cuts;
    ev.lift = node_lift(problem_, node);
    refresh(ev, node.bound);
    const int rounds = node.depth == 0 ? config_.root_cut_rounds : config_.node_cut_rounds;
    CutLoopConfig gen = cut_config_;
    gen.seed = derive_seed(config_.seed, static_cast<std::uint64_t>(node.id));
    std::set<Cut> pool(ev.cuts.begin(), ev.cuts.end());
    const int cap = 4 * problem_.n;
    for (int r = 0; r < rounds && !ev.infeasible; ++r) {
        const double best = ev.incumbent ? std::min(fstar, ev.incumbent->value) : fstar;
        if (fathomable(ev.bound, best)) break;
        CutBatch batch = generate_cuts(config_.cut_strategy, ev.solution.X, ev.solution.x, problem_.p, gen, r);
        if (batch.no_cut_certified) break;
        int added = 0;
        for (auto& c : batch.cuts) {
            if (added >= cap) break;
            if (!pool.insert(c).second) continue;
            ev.lift.add(lift_cut(c, static_cast<int>(ev.cuts.size())));
            ev.cuts.push_back(std::move(c));
            ++added;
        }
        if (added == 0) break;
        const bool was_certified = ev.certified;
        ev.certified = false;
        refresh(ev, node.bound);
        ev.certified = ev.certified || was_certified;
    }
    return ev;
}

std::vector<Node> Solver::branch(const Node& node, const Evaluation& ev, int& next_id) const {
    auto find_dir = [&](const IntVector& c) -> std::optional<std::size_t> {
        for (std::size_t k = 0; k < node.dirs.size(); ++k)
            if (node.dirs[k].c == c) return k;
        return std::nullopt;
    };
    auto admissible = [&](const IntVector& c, long long d) {
        const auto k = find_dir(c);
        return !k || node.dirs[*k].splits(d);
    };

    const Eigen::VectorXd& x = ev.solution.x;
    const int n = problem_.n;
    bool integral = true;
    for (int i = 0; i < n; ++i) integral = integral && std::abs(x(i) - std::round(x(i))) <= config_.integrality_tol;

    std::optional<BranchChoice> choice;
    if (!integral || config_.branching == Branching::DualCut)
        choice = select_branching(ev.solution, ev.lift, config_, admissible);
    if (!choice) {
        // Integral x_hat with a loose relaxation: split the coordinate with the most
        // spread, X_ii - x_i^2, so the child holding x_i gets it at an interval end.
        int best_i = -1;
        long long best_d = 0;
        double best_var = -kInf;
        for (int i = 0; i < n; ++i) {
            IntVector c = IntVector::Zero(n);
            c(i) = 1;
            const auto k = find_dir(c);
            const auto v = static_cast<long long>(std::round(x(i)));
            std::optional<long long> lo, hi;
            if (k) {
                lo = node.dirs[*k].lo;
                hi = node.dirs[*k].hi;
            }
            long long d = v;
            if (lo && hi) d = (*hi - v >= v - *lo) ? v : v - 1;
            else if (hi) d = v - 1;
            if (!admissible(c, d)) d = d == v ? v - 1 : v;
            if (!admissible(c, d)) continue;
            const double var = ev.solution.X(i, i) - x(i) * x(i);
            if (var > best_var) {
                best_var = var;
                best_i = i;
                best_d = d;
            }
        }
        if (best_i < 0) return {};
        IntVector c = IntVector::Zero(n);
        c(best_i) = 1;
        choice = BranchChoice{std::move(c), best_d, std::nullopt};
    }

    std::vector<Cut> cuts = ev.cuts;
    if (choice->removed) {
        const auto& removed = ev.lift.constraints[static_cast<std::size_t>(*choice->removed)].cut;
        if (removed) cuts.erase(std::remove(cuts.begin(), cuts.end(), *removed), cuts.end());
    }
    std::vector<Node> children;
    for (int side = 0; side < 2; ++side) {
        Node child;
        child.depth = node.depth + 1;
        child.bound = ev.bound;
        child.cuts = cuts;
        child.dirs = node.dirs;
        auto k = find_dir(choice->c);
        if (!k) {
            child.dirs.push_back({choice->c, std::nullopt, std::nullopt});
            k = child.dirs.size() - 1;
        }
        Direction& dir = child.dirs[*k];
        if (side == 0) dir.hi = dir.hi ? std::min(*dir.hi, choice->d) : choice->d;
        else dir.lo = dir.lo ? std::max(*dir.lo, choice->d + 1) : choice->d + 1;
        if (dir.lo && dir.hi && *dir.lo > *dir.hi) continue;
        child.id = next_id++;
        children.push_back(std::move(child));
    }
    return children;
}

std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

BncResult Solver::run() {
    if (problem_.p != problem_.n) throw Error("branch_and_cut: requires a pure integer problem (p = n)");
    BncResult result;
    result.f_star = kInf;

    Node root;
    if (config_.box) {
        const IntBox& box = *config_.box;
        if (box.lo.size() != problem_.n || box.hi.size() != problem_.n)
            throw Error("branch_and_cut: box dimension mismatch");
        for (int i = 0; i < problem_.n; ++i) {
            if (box.lo(i) > box.hi(i)) {
                result.status = BncStatus::Infeasible;
                result.lower_bound = kInf;
                return result;
            }
            IntVector c = IntVector::Zero(problem_.n);
            c(i) = 1;
            root.dirs.push_back({std::move(c), box.lo(i), box.hi(i)});
        }
    }
    int next_id = 1;
    std::vector<Node> open;
    open.push_back(std::move(root));

    auto pop = [&]() {
        std::size_t pick = open.size() - 1;
        if (config_.node_selection == NodeSelection::BestBound) {
            pick = 0;
            for (std::size_t k = 1; k < open.size(); ++k)
                if (open[k].bound < open[pick].bound ||
                    (open[k].bound == open[pick].bound && open[k].id < open[pick].id))
                    pick = k;
        }
        Node node = std::move(open[pick]);
        open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));
        return node;
    };
    auto global_bound = [&] {
        double lb = result.f_star;
        for (const auto& node : open) lb = std::min(lb, node.bound);
        return lb;
    };

    while (!open.empty() && result.nodes < config_.max_nodes) {
        std::vector<Node> batch;
        const int width = std::min(config_.threads, config_.max_nodes - result.nodes);
        while (!open.empty() && static_cast<int>(batch.size()) < width) {
            Node node = pop();
            if (fathomable(node.bound, result.f_star)) continue;
            batch.push_back(std::move(node));
        }
        if (batch.empty()) continue;

        std::vector<Evaluation> evals(batch.size());
        const double fstar = result.f_star;
        parallel_for(static_cast<int>(batch.size()), config_.threads,
                     [&](int k) { evals[static_cast<std::size_t>(k)] = evaluate_node(batch[static_cast<std::size_t>(k)], fstar); });

        for (std::size_t k = 0; k < batch.size(); ++k) {
            const Node& node = batch[k];
            Evaluation& ev = evals[k];
            ++result.nodes;
            if (!ev.certified) ++result.uncertified_nodes;
            if (ev.incumbent && ev.incumbent->value < result.f_star) {
                result.f_star = ev.incumbent->value;
                result.x = ev.incumbent->x;
            }
            if (!ev.infeasible && !fathomable(ev.bound, result.f_star)) {
                auto children = branch(node, ev, next_id);
                for (auto& child : children) open.push_back(std::move(child));
            }
            if (config_.log)
                config_.log("node=" + std::to_string(node.id) + " depth=" + std::to_string(node.depth) +
                            " bound=" + format_value(ev.bound) + " incumbent=" + format_value(result.f_star) +
                            " open=" + std::to_string(open.size()));
        }
        result.lower_bound_trace.push_back(global_bound());
        result.incumbent_trace.push_back(result.f_star);
    }

    // Nodes left open but already dominated by the incumbent need no evaluation.
    open.erase(std::remove_if(open.begin(), open.end(),
                              [&](const Node& node) { return fathomable(node.bound, result.f_star); }),
               open.end());
    result.lower_bound = global_bound();
    if (!open.empty()) result.status = BncStatus::NodeLimit;
    else result.status = result.x ? BncStatus::Optimal : BncStatus::Infeasible;
    return result;
}

}  // namespace

BncResult branch_and_cut(const QcqpProblem& problem, const BncConfig& config) {
    config.validate();
    problem.validate();
    return Solver(problem, config).run();
}

}  // namespace miqcqp
