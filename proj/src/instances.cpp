#include "miqcqp/instances.hpp"

#include "miqcqp/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace miqcqp {

using nlohmann::json;

IlsInstance gen_ils(int n, std::uint64_t seed) {
    if (n < 1) throw Error("gen_ils: n must be positive");
    Rng rng(seed);
    IlsInstance inst;
    inst.A.resize(2 * n, n);
    for (int i = 0; i < 2 * n; ++i)
        for (int j = 0; j < n; ++j) inst.A(i, j) = rng.normal();
    inst.x_cts.resize(n);
    for (int j = 0; j < n; ++j) inst.x_cts(j) = rng.uniform();
    inst.problem = ils_problem(inst.A, inst.x_cts);
    return inst;
}

QcqpProblem ils_problem(const Eigen::MatrixXd& A, const Eigen::VectorXd& x_cts) {
    if (A.cols() != x_cts.size()) throw Error("ils_problem: A has " + std::to_string(A.cols()) +
                                              " columns but x_cts has length " + std::to_string(x_cts.size()));
    const Eigen::MatrixXd G = A.transpose() * A;
    const Eigen::VectorXd Gx = G * x_cts;
    const int n = static_cast<int>(x_cts.size());
    return QcqpProblem(n, n, QuadraticForm(G, -2.0 * Gx, x_cts.dot(Gx)));
}

namespace {

void check_weights(const Eigen::MatrixXd& W) {
    if (W.rows() != W.cols()) throw Error("weight matrix is not square");
    if (!W.allFinite()) throw Error("weight matrix has non-finite entries");
    if ((W - W.transpose()).cwiseAbs().maxCoeff() > 0.0) throw Error("weight matrix is not symmetric");
    if (W.rows() > 0 && W.diagonal().cwiseAbs().maxCoeff() > 0.0) throw Error("weight matrix has a nonzero diagonal");
}

}  // namespace

QcqpProblem maxcut_to_qcqp(const Eigen::MatrixXd& W) {
    check_weights(W);
    const int n = static_cast<int>(W.rows());
    QcqpProblem problem(n, n, QuadraticForm(W, -(W * Eigen::VectorXd::Ones(n)), 0.0));
    for (int i = 0; i < n; ++i) {
        QuadraticForm f = QuadraticForm::zero(n);
        f.P(i, i) = 1.0;
        f.q(i) = -1.0;
        problem.add_constraint(std::move(f), Sense::Eq);
    }
    return problem;
}

std::optional<Eigen::MatrixXd> as_maxcut(const QcqpProblem& problem) {
    const int n = problem.n;
    if (problem.p != n || problem.constraints.size() != static_cast<std::size_t>(n)) return std::nullopt;
    const Eigen::MatrixXd& W = problem.objective.P;
    if (n > 0 && W.diagonal().cwiseAbs().maxCoeff() > 0.0) return std::nullopt;
    if (problem.objective.r != 0.0 || problem.objective.q != -(W * Eigen::VectorXd::Ones(n))) return std::nullopt;
    for (int i = 0; i < n; ++i) {
        const Constraint& c = problem.constraints[static_cast<std::size_t>(i)];
        QuadraticForm expect = QuadraticForm::zero(n);
        expect.P(i, i) = 1.0;
        expect.q(i) = -1.0;
        if (c.sense != Sense::Eq || c.form.P != expect.P || c.form.q != expect.q || c.form.r != 0.0)
            return std::nullopt;
    }
    return W;
}

double maxcut_value(const Eigen::MatrixXd& W, const Eigen::VectorXd& z) {
    if (z.size() != W.rows()) throw Error("maxcut_value: dimension mismatch");
    return (W * Eigen::VectorXd::Ones(z.size())).dot(z) - z.dot(W * z);
}

CutValueForms cut_value_identity_check(const Eigen::MatrixXd& W, const Eigen::VectorXd& x) {
    check_weights(W);
    if (x.size() != W.rows()) throw Error("cut_value_identity_check: dimension mismatch");
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x(i) != 1.0 && x(i) != -1.0) throw Error("cut_value_identity_check: entries must be +1 or -1");
    double sign_form = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        for (Eigen::Index j = i + 1; j < x.size(); ++j) sign_form += 0.5 * W(i, j) * (1.0 - x(i) * x(j));
    const Eigen::VectorXd z = (x.array() + 1.0) / 2.0;
    return {sign_form, maxcut_value(W, z)};
}

Eigen::MatrixXd parse_graph(std::istream& in) {
    long long n = 0, m = 0;
    if (!(in >> n >> m) || n < 0 || m < 0) throw Error("graph: expected header \"n m\"");
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (long long e = 0; e < m; ++e) {
        long long i = 0, j = 0;
        double w = 0.0;
        if (!(in >> i >> j >> w)) throw Error("graph: edge " + std::to_string(e + 1) + " is malformed or missing");
        if (i < 1 || j < 1 || i > n || j > n)
            throw Error("graph: edge " + std::to_string(e + 1) + " has a vertex outside 1.." + std::to_string(n));
        if (i == j) throw Error("graph: edge " + std::to_string(e + 1) + " is a self-loop");
        if (w != std::round(w)) throw Error("graph: edge " + std::to_string(e + 1) + " has a non-integer weight");
        if (W(i - 1, j - 1) != 0.0)
            throw Error("graph: duplicate edge " + std::to_string(i) + " " + std::to_string(j));
        if (w == 0.0) continue;
        W(i - 1, j - 1) = w;
        W(j - 1, i - 1) = w;
    }
    std::string rest;
    if (in >> rest) throw Error("graph: trailing data after " + std::to_string(m) + " edges");
    return W;
}

Eigen::MatrixXd read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file " + path);
    return parse_graph(in);
}

void print_graph(std::ostream& out, const Eigen::MatrixXd& W) {
    check_weights(W);
    const Eigen::Index n = W.rows();
    long long m = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) m += W(i, j) != 0.0;
    out << n << ' ' << m << '\n';
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (W(i, j) != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << static_cast<long long>(W(i, j)) << '\n';
}

void write_graph(const std::string& path, const Eigen::MatrixXd& W) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write graph file " + path);
    print_graph(out, W);
    if (!out) throw Error("write failed for " + path);
}

Eigen::MatrixXd gen_random_graph(int n, double density, std::uint64_t seed) {
    if (n < 0) throw Error("gen_random_graph: negative n");
    if (!(density >= 0.0 && density <= 1.0)) throw Error("gen_random_graph: density must lie in [0, 1]");
    Rng rng(seed);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool present = rng.uniform() < density;
            const double w = rng.coin() ? 1.0 : -1.0;
            if (present) W(i, j) = W(j, i) = w;
        }
    return W;
}

namespace {

json form_to_json(const QuadraticForm& f) {
    const Eigen::Index n = f.dim();
    std::vector<double> P(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) P[static_cast<std::size_t>(i * n + j)] = f.P(i, j);
    return {{"P", P}, {"q", std::vector<double>(f.q.data(), f.q.data() + n)}, {"r", f.r}};
}

const json& field(const json& obj, const char* name, const std::string& where) {
    if (!obj.is_object()) throw Error(where + ": expected an object");
    auto it = obj.find(name);
    if (it == obj.end()) throw Error(where + ": missing field \"" + name + "\"");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) throw Error(where + ": expected a number");
    return v.get<double>();
}

QuadraticForm form_from_json(const json& obj, int n, const std::string& where) {
    const json& P = field(obj, "P", where);
    const json& q = field(obj, "q", where);
    if (!P.is_array() || P.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw Error(where + ".P: expected an array of " + std::to_string(n * n) + " numbers");
    if (!q.is_array() || q.size() != static_cast<std::size_t>(n))
        throw Error(where + ".q: expected an array of " + std::to_string(n) + " numbers");
    Eigen::MatrixXd Pm(n, n);
    Eigen::VectorXd qv(n);
    for (int i = 0; i < n; ++i) {
        qv(i) = number(q[static_cast<std::size_t>(i)], where + ".q[" + std::to_string(i) + "]");
        for (int j = 0; j < n; ++j) {
            const auto k = static_cast<std::size_t>(i * n + j);
            Pm(i, j) = number(P[k], where + ".P[" + std::to_string(k) + "]");
        }
    }
    return QuadraticForm(Pm, qv, number(field(obj, "r", where), where + ".r"));
}

int integer(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw Error(where + ": expected an integer");
    return v.get<int>();
}

}  // namespace

std::string problem_to_json(const QcqpProblem& problem, int indent) {
    json cons = json::array();
    for (const auto& c : problem.constraints) {
        json jc = form_to_json(c.form);
        jc["sense"] = c.sense == Sense::Eq ? "eq" : "leq";
        cons.push_back(std::move(jc));
    }
    json doc = {{"n", problem.n}, {"p", problem.p}, {"objective", form_to_json(problem.objective)},
                {"constraints", std::move(cons)}};
    return doc.dump(indent) + "\n";
}

QcqpProblem problem_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("problem JSON: ") + e.what());
    }
    const int n = integer(field(doc, "n", "problem"), "problem.n");
    const int p = integer(field(doc, "p", "problem"), "problem.p");
    if (n < 0) throw Error("problem.n: must be nonnegative");
    if (p < 0 || p > n) throw Error("problem.p: must satisfy 0 <= p <= n");
    QcqpProblem problem(n, p, form_from_json(field(doc, "objective", "problem"), n, "problem.objective"));
    const json& cons = field(doc, "constraints", "problem");
    if (!cons.is_array()) throw Error("problem.constraints: expected an array");
    for (std::size_t i = 0; i < cons.size(); ++i) {
        const std::string where = "problem.constraints[" + std::to_string(i) + "]";
        const json& sense = field(cons[i], "sense", where);
        if (!sense.is_string() || (sense != "leq" && sense != "eq"))
            throw Error(where + ".sense: expected \"leq\" or \"eq\"");
        problem.add_constraint(form_from_json(cons[i], n, where), sense == "eq" ? Sense::Eq : Sense::Leq);
    }
    return problem;
}

QcqpProblem read_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open problem file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return problem_from_json(text.str());
}

void write_problem(const std::string& path, const QcqpProblem& problem) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write problem file " + path);
    out << problem_to_json(problem);
    if (!out) throw Error("write failed for " + path);
}

QcqpProblem sphere_example() {
    QcqpProblem problem(2, 2, QuadraticForm(-Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), 0.0));
    problem.add_constraint(QuadraticForm(Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Zero(2), -1.2));
    return problem;
}

}  // namespace miqcqp
