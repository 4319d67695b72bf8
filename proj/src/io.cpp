#include <setcd/io.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <setcd/error.hpp>

namespace setcd {

using nlohmann::json;

json to_json(const Graph& g)
{
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({e.lo, e.hi});
    return {{"n", g.num_nodes()}, {"edges", edges}};
}

Graph graph_from_json(const json& j)
{
    try {
        if (j.contains("circulant")) {
            const auto& c = j.at("circulant");
            return circulant_regular(c.at("n").get<int>(), c.at("degree").get<int>());
        }
        std::vector<std::pair<int, int>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw Error(ErrorKind::ParseError, "edge must be [i, j]");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return Graph::build(j.at("n").get<int>(), edges);
    } catch (const json::exception& ex) {
        throw Error(ErrorKind::ParseError, std::string("graph: ") + ex.what());
    }
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& ex) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + ex.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
    out << j.dump(2) << '\n';
}

Graph read_graph_file(const std::filesystem::path& path)
{
    return graph_from_json(read_json_file(path));
}

void write_graph_file(const std::filesystem::path& path, const Graph& g)
{
    write_json_file(path, to_json(g));
}

Quadratic quadratic_from_json(const json& j)
{
    try {
        if (j.value("type", "quadratic") != "quadratic") {
            throw Error(ErrorKind::ParseError, "unsupported function type " + j.at("type").get<std::string>());
        }
        Matrix q;
        if (j.contains("Q_matrix")) {
            const auto& rows = j.at("Q_matrix");
            const auto d = static_cast<Eigen::Index>(rows.size());
            q.resize(d, d);
            for (Eigen::Index r = 0; r < d; ++r) {
                if (static_cast<Eigen::Index>(rows[r].size()) != d) {
                    throw Error(ErrorKind::DimensionMismatch, "Q_matrix must be square");
                }
                for (Eigen::Index c = 0; c < d; ++c) q(r, c) = rows[r][c].get<double>();
            }
        } else {
            const int d = j.at("d").get<int>();
            const std::string kind = j.value("Q", "scaled_identity");
            if (kind != "scaled_identity") throw Error(ErrorKind::ParseError, "unknown Q kind " + kind);
            q = 2.0 * j.at("c").get<double>() * Matrix::Identity(d, d);
        }
        if (j.contains("d") && j.at("d").get<int>() != q.rows()) {
            throw Error(ErrorKind::DimensionMismatch, "d does not match Q_matrix");
        }
        Vector b = Vector::Zero(q.rows());
        if (j.contains("b")) {
            const auto& arr = j.at("b");
            if (static_cast<Eigen::Index>(arr.size()) != q.rows()) throw Error(ErrorKind::DimensionMismatch, "b");
            for (Eigen::Index k = 0; k < b.size(); ++k) b(k) = arr[k].get<double>();
        }
        return Quadratic(std::move(q), std::move(b), j.value("c0", 0.0));
    } catch (const json::exception& ex) {
        throw Error(ErrorKind::ParseError, std::string("function: ") + ex.what());
    }
}

ProblemSetup problem_from_json(const json& j)
{
    try {
        const std::string setting = j.value("setting", "decentralized");
        Graph g = graph_from_json(j.at("graph"));
        const auto seed = j.value("seed", std::uint64_t{0});
        if (setting == "decentralized") {
            std::vector<Quadratic> functions;
            const auto& spec = j.at("functions");
            if (spec.is_array()) {
                for (const auto& f : spec) functions.push_back(quadratic_from_json(f));
            } else {
                for (int i = 0; i < g.num_nodes(); ++i) functions.push_back(quadratic_from_json(spec));
            }
            if (j.contains("d")) {
                for (const auto& f : functions) {
                    if (f.dim() != j.at("d").get<int>()) throw Error(ErrorKind::DimensionMismatch, "function dimension vs d");
                }
            }
            DualConsensusProblem p(std::move(g), std::move(functions));
            const std::string init = j.value("init", "zero");
            DualState s = init == "gaussian" ? p.gaussian_state(seed) : p.zero_state();
            if (init != "gaussian" && init != "zero") throw Error(ErrorKind::ParseError, "unknown init " + init);
            return DecentralizedSetup{std::move(p), std::move(s)};
        }
        if (setting == "separable") {
            auto p = separable_problem(g, j.value("mean", 10.0), j.value("std", 3.0), seed);
            const std::string init = j.value("init", "far_near");
            SeparableState s = init == "far_near" ? far_near_state(p, perfect_matching_circulant(p.graph()))
                                                  : p.state_from(Vector::Ones(p.num_coordinates()));
            if (init != "far_near" && init != "ones") throw Error(ErrorKind::ParseError, "unknown init " + init);
            return SeparableSetup{std::move(p), std::move(s)};
        }
        throw Error(ErrorKind::ParseError, "unknown setting " + setting);
    } catch (const json::exception& ex) {
        throw Error(ErrorKind::ParseError, std::string("problem: ") + ex.what());
    }
}

void write_trace_csv(std::ostream& out, const Trace& trace)
{
    out << "iter,node,edge,grad_sq,suboptimality\n";
    out << std::setprecision(17);
    for (const auto& r : trace.rows) {
        out << r.iter << ',' << r.node << ',' << r.edge << ',' << r.grad_sq << ',' << r.suboptimality << '\n';
    }
}

std::vector<TraceRow> read_trace_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line.rfind("iter,node,edge,grad_sq,suboptimality", 0) != 0) {
        throw Error(ErrorKind::ParseError, "missing trace header");
    }
    std::vector<TraceRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        TraceRow r{};
        char c1 = 0, c2 = 0, c3 = 0, c4 = 0;
        if (!(fields >> r.iter >> c1 >> r.node >> c2 >> r.edge >> c3 >> r.grad_sq >> c4 >> r.suboptimality) ||
            c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',') {
            throw Error(ErrorKind::ParseError, "bad trace row '" + line + "'");
        }
        rows.push_back(r);
    }
    return rows;
}

json trace_sidecar(const Trace& trace)
{
    const double final = trace.rows.empty() ? trace.initial_suboptimality : trace.rows.back().suboptimality;
    return {{"algorithm", to_string(trace.rule)},
            {"seed", trace.seed},
            {"eta", trace.eta},
            {"iterations", trace.rows.empty() ? 0 : trace.rows.back().iter},
            {"initial_suboptimality", trace.initial_suboptimality},
            {"final_suboptimality", final},
            {"messages", trace.messages},
            {"resyncs", trace.resyncs}};
}

} // namespace setcd
