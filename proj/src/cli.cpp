#include "miqcqp/cli.hpp"

#include "miqcqp/bnc.hpp"
#include "miqcqp/cut_loop.hpp"
#include "miqcqp/instances.hpp"
#include "miqcqp/oracle.hpp"
#include "miqcqp/rounding.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace miqcqp {

namespace {

using nlohmann::json;

/// Failures that map onto a specific exit code.
struct CliFailure {
    int code;
    std::string message;
};

struct Input {
    std::string name;
    QcqpProblem problem;
    std::optional<Eigen::MatrixXd> W;
};

Input load_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliFailure{exit_code::io_failure, "cannot open " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    Input input;
    input.name = std::filesystem::path(path).filename().string();
    try {
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') {
            input.problem = problem_from_json(text);
            input.W = as_maxcut(input.problem);
        } else {
            std::istringstream graph(text);
            input.W = parse_graph(graph);
            input.problem = maxcut_to_qcqp(*input.W);
        }
    } catch (const Error& e) {
        throw CliFailure{exit_code::io_failure, path + ": " + e.what()};
    }
    return input;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("MIQCQP_SEED")) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (errno != 0 || end == env || *end != '\0')
            throw CliFailure{exit_code::bad_flags, std::string("MIQCQP_SEED is not an unsigned integer: ") + env};
        return v;
    }
    return 0;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out || !(out << text)) throw CliFailure{exit_code::io_failure, "cannot write " + path};
}

bool is_ils_shaped(const QcqpProblem& problem) {
    return problem.p == problem.n && problem.constraints.empty() && problem.n > 0;
}

// gen ---------------------------------------------------------------------

struct GenArgs {
    std::string kind;
    int n = 0;
    std::optional<std::uint64_t> seed;
    double density = 0.5;
    std::string out;
    std::string format;
};

int run_gen(const GenArgs& a, std::ostream& out) {
    const std::uint64_t seed = resolve_seed(a.seed);
    std::string text;
    if (a.kind == "ils") {
        if (a.n < 1) throw CliFailure{exit_code::bad_flags, "--n must be positive"};
        if (a.format == "graph") throw CliFailure{exit_code::bad_flags, "ils instances are written as json"};
        text = problem_to_json(gen_ils(a.n, seed).problem);
    } else {
        if (a.n < 0) throw CliFailure{exit_code::bad_flags, "--n must be nonnegative"};
        if (!(a.density >= 0.0 && a.density <= 1.0))
            throw CliFailure{exit_code::bad_flags, "--density must lie in [0, 1]"};
        const Eigen::MatrixXd W = gen_random_graph(a.n, a.density, seed);
        if (a.format == "json") {
            text = problem_to_json(maxcut_to_qcqp(W));
        } else {
            std::ostringstream s;
            print_graph(s, W);
            text = s.str();
        }
    }
    if (a.out.empty()) out << text;
    else write_text(a.out, text);
    return exit_code::ok;
}

// bound -------------------------------------------------------------------

struct BoundArgs {
    std::string in;
    std::string strategy = "combined";
    int max_rounds = 10;
    std::string out;
    bool baseline_k1_fixed = false;
    int samples = 1000;
    int cap = -1;
    double eps = 1e-6;
    int random_count = 10000;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool pretty = false;
};

int run_bound(const BoundArgs& a, std::ostream& out) {
    const Input input = load_input(a.in);
    const auto strategy = parse_strategy(a.strategy);
    if (!strategy) throw CliFailure{exit_code::bad_flags, "unknown strategy " + a.strategy};
    if (a.samples < 1) throw CliFailure{exit_code::bad_flags, "--samples must be positive"};
    if (a.threads < 1) throw CliFailure{exit_code::bad_flags, "--threads must be positive"};

    CutLoopConfig cfg;
    cfg.strategy = *strategy;
    cfg.max_rounds = a.max_rounds;
    cfg.cap = a.cap;
    cfg.eps = a.eps;
    cfg.random_count = a.random_count;
    cfg.seed = resolve_seed(a.seed);
    cfg.baseline_k1_fixed = a.baseline_k1_fixed;
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw CliFailure{exit_code::bad_flags, e.what()};
    }
    const TightenReport report = tighten(input.problem, cfg);

    std::optional<double> upper;
    const auto& sol = report.solution;
    const bool usable = (sol.status == SdpStatus::Optimal || sol.status == SdpStatus::MaxIters) && sol.x.allFinite();
    if (usable) {
        if (input.W) {
            upper = -maxcut_round(sol, *input.W, a.samples, cfg.seed, a.threads).value;
        } else if (is_ils_shaped(input.problem)) {
            upper = ils_round(sol, input.problem, a.samples, cfg.seed, a.threads).value;
        } else if (auto inc = try_incumbent(sol, input.problem, 1e-9)) {
            upper = inc->value;
        }
    }

    const double f0 = report.rounds.front().f_sdp;
    std::ostringstream csv;
    csv << "instance,n,strategy,round,f_sdp,certified_bound,cuts_total,upper_bound,gap_ratio_alpha,wall_ms,status\n";
    std::vector<std::optional<double>> alphas;
    for (const auto& rec : report.rounds) {
        std::optional<double> alpha;
        if (upper && std::isfinite(f0) && std::isfinite(rec.f_sdp) && std::abs(*upper - f0) > 1e-12)
            alpha = (*upper - rec.f_sdp) / (*upper - f0);
        alphas.push_back(alpha);
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", rec.wall_ms);
        csv << input.name << ',' << input.problem.n << ',' << a.strategy << ',' << rec.round << ','
            << fmt(rec.f_sdp) << ',' << fmt(rec.certified_bound) << ',' << rec.cuts_total << ',' << fmt(upper)
            << ',' << fmt(alpha) << ',' << wall << ',' << to_string(rec.status) << '\n';
    }
    if (!a.out.empty()) write_text(a.out, csv.str());
    if (a.pretty) {
        char line[256];
        std::snprintf(line, sizeof line, "%-6s %14s %14s %8s %14s %8s %10s\n", "round", "f_sdp", "certified",
                      "cuts", "upper", "alpha", "status");
        out << line;
        for (std::size_t k = 0; k < report.rounds.size(); ++k) {
            const auto& rec = report.rounds[k];
            std::snprintf(line, sizeof line, "%-6d %14s %14s %8d %14s %8s %10s\n", rec.round, fmt(rec.f_sdp).c_str(),
                          fmt(rec.certified_bound).c_str(), rec.cuts_total, fmt(upper).c_str(),
                          fmt(alphas[k]).c_str(), to_string(rec.status).c_str());
            out << line;
        }
        out << "stop: " << to_string(report.stop) << '\n';
    } else if (a.out.empty()) {
        out << csv.str();
    }
    return sol.status == SdpStatus::Optimal ? exit_code::ok : exit_code::solver_failure;
}

// solve -------------------------------------------------------------------

struct SolveArgs {
    std::string in;
    int max_nodes = 10000;
    std::string branching = "dual";
    std::string node_selection = "best";
    std::string box;
    int root_cut_rounds = 2;
    int node_cut_rounds = 1;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool quiet = false;
};

std::optional<IntBox> resolve_box(const std::string& spec, const QcqpProblem& problem, bool default_auto) {
    if (spec.empty() && !default_auto) return std::nullopt;
    if (spec.empty() || spec == "auto") {
        if (!is_ils_shaped(problem)) throw CliFailure{exit_code::bad_flags, "--box auto needs an unconstrained problem"};
        try {
            return ils_box(problem);
        } catch (const Error& e) {
            throw CliFailure{exit_code::bad_flags, std::string("--box auto: ") + e.what()};
        }
    }
    if (spec == "none") return std::nullopt;
    char* end = nullptr;
    const long long r = std::strtoll(spec.c_str(), &end, 10);
    if (end == spec.c_str() || *end != '\0' || r < 0)
        throw CliFailure{exit_code::bad_flags, "--box expects auto, none or a nonnegative radius"};
    return uniform_box(problem.n, r);
}

int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
    const Input input = load_input(a.in);
    BncConfig cfg;
    cfg.max_nodes = a.max_nodes;
    cfg.branching = a.branching == "frac" ? Branching::MostFractional : Branching::DualCut;
    cfg.node_selection = a.node_selection == "dfs" ? NodeSelection::Dfs : NodeSelection::BestBound;
    cfg.root_cut_rounds = a.root_cut_rounds;
    cfg.node_cut_rounds = a.node_cut_rounds;
    cfg.seed = resolve_seed(a.seed);
    cfg.threads = a.threads;
    cfg.box = resolve_box(a.box, input.problem, is_ils_shaped(input.problem));
    if (!a.quiet) cfg.log = [&err](const std::string& line) { err << line << '\n'; };
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw CliFailure{exit_code::bad_flags, e.what()};
    }
    if (input.problem.p != input.problem.n)
        throw CliFailure{exit_code::bad_flags, "solve handles pure integer problems only"};

    const BncResult r = branch_and_cut(input.problem, cfg);
    json doc = {{"instance", input.name},
                {"status", to_string(r.status)},
                {"f_star", number_or_null(r.f_star)},
                {"lower_bound", number_or_null(r.lower_bound)},
                {"nodes", r.nodes},
                {"uncertified_nodes", r.uncertified_nodes}};
    if (r.x) doc["x"] = std::vector<long long>(r.x->data(), r.x->data() + r.x->size());
    else doc["x"] = nullptr;
    if (input.W) doc["cut_value"] = number_or_null(-r.f_star);
    out << doc.dump() << '\n';
    return r.status == BncStatus::NodeLimit ? exit_code::node_limit : exit_code::ok;
}

// oracle ------------------------------------------------------------------

struct OracleArgs {
    std::string in;
    std::string box;
};

int run_oracle(const OracleArgs& a, std::ostream& out) {
    const Input input = load_input(a.in);
    json doc = {{"instance", input.name}};
    if (input.W && a.box.empty()) {
        if (input.W->rows() > 22) throw CliFailure{exit_code::box_too_large, "max-cut enumeration is limited to n <= 22"};
        const auto r = brute_force_maxcut(*input.W);
        doc["cut_value"] = r.value;
        doc["f_star"] = -r.value;
        doc["z"] = std::vector<double>(r.z.data(), r.z.data() + r.z.size());
    } else {
        if (input.problem.p != input.problem.n)
            throw CliFailure{exit_code::bad_flags, "oracle handles pure integer problems only"};
        const auto box = resolve_box(a.box, input.problem, true);
        if (box->volume() > kMaxBruteForcePoints)
            throw CliFailure{exit_code::box_too_large,
                             "box has " + fmt(box->volume()) + " points, limit is " + fmt(kMaxBruteForcePoints)};
        const auto r = brute_force(input.problem, *box);
        doc["f_star"] = number_or_null(r.f_star);
        json argmins = json::array();
        for (const auto& x : r.argmins) argmins.push_back(std::vector<long long>(x.data(), x.data() + x.size()));
        doc["argmins"] = std::move(argmins);
    }
    out << doc.dump() << '\n';
    return exit_code::ok;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Certified SDP bounds and branch-and-cut for mixed-integer QCQPs"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate an ILS instance (JSON) or a random +-1 graph");
    g->add_option("kind", gen.kind, "ils or maxcut")->required()->check(CLI::IsMember({"ils", "maxcut"}));
    g->add_option("--n", gen.n, "Dimension / vertex count")->required();
    g->add_option("--seed", gen.seed, "Seed (falls back to MIQCQP_SEED, then 0)");
    g->add_option("--density", gen.density, "Edge probability for maxcut")->capture_default_str();
    g->add_option("--out", gen.out, "Output file (default stdout)");
    g->add_option("--format", gen.format, "graph or json (maxcut only)")->check(CLI::IsMember({"graph", "json"}));

    BoundArgs bound;
    auto* b = app.add_subcommand("bound", "Cut loop with rounding; per-round CSV report");
    b->add_option("--in", bound.in, "Problem JSON or graph file")->required();
    b->add_option("--strategy", bound.strategy, "enum1|enum2|enum3|eig|random3|combined")->capture_default_str()
        ->check(CLI::IsMember({"enum1", "enum2", "enum3", "eig", "random3", "combined"}));
    b->add_option("--max-rounds", bound.max_rounds, "Cut rounds after the initial solve")->capture_default_str();
    b->add_option("--out", bound.out, "CSV file (default stdout)");
    b->add_flag("--baseline-k1-fixed", bound.baseline_k1_fixed, "Start from the cuts x_i(x_i - 1) >= 0");
    b->add_option("--samples", bound.samples, "Rounding samples")->capture_default_str();
    b->add_option("--cap", bound.cap, "Cuts per round (negative: 4n)")->capture_default_str();
    b->add_option("--eps", bound.eps, "Minimum violation of an added cut")->capture_default_str();
    b->add_option("--random-count", bound.random_count, "Random 3-sparse candidates per round")->capture_default_str();
    b->add_option("--seed", bound.seed, "Seed (falls back to MIQCQP_SEED, then 0)");
    b->add_option("--threads", bound.threads, "Workers for rounding samples")->capture_default_str();
    b->add_flag("--pretty", bound.pretty, "Human-readable table on stdout");

    SolveArgs solve_args;
    auto* s = app.add_subcommand("solve", "Branch-and-cut global solve");
    s->add_option("--in", solve_args.in, "Problem JSON or graph file")->required();
    s->add_option("--max-nodes", solve_args.max_nodes, "Node limit")->capture_default_str();
    s->add_option("--branching", solve_args.branching, "dual or frac")->capture_default_str()->check(CLI::IsMember({"dual", "frac"}));
    s->add_option("--node-selection", solve_args.node_selection, "best or dfs")->capture_default_str()
        ->check(CLI::IsMember({"best", "dfs"}));
    s->add_option("--box", solve_args.box, "auto, none or an integer radius");
    s->add_option("--root-cut-rounds", solve_args.root_cut_rounds, "Cut rounds at the root")->capture_default_str();
    s->add_option("--node-cut-rounds", solve_args.node_cut_rounds, "Cut rounds at other nodes")->capture_default_str();
    s->add_option("--seed", solve_args.seed, "Seed (falls back to MIQCQP_SEED, then 0)");
    s->add_option("--threads", solve_args.threads, "Parallel node evaluations")->capture_default_str();
    s->add_flag("--quiet", solve_args.quiet, "Suppress progress lines");

    OracleArgs oracle;
    auto* o = app.add_subcommand("oracle", "Brute-force optimum");
    o->add_option("--in", oracle.in, "Problem JSON or graph file")->required();
    o->add_option("--box", oracle.box, "auto or an integer radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::bad_flags;
    }

    try {
        if (*g) return run_gen(gen, out);
        if (*b) return run_bound(bound, out);
        if (*s) return run_solve(solve_args, out, err);
        return run_oracle(oracle, out);
    } catch (const CliFailure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::solver_failure;
    }
}

}  // namespace miqcqp
