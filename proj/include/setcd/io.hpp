#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include <setcd/dual.hpp>
#include <setcd/engine.hpp>
#include <setcd/graph.hpp>
#include <setcd/objective.hpp>

namespace setcd {

// Graph files: {"n": int, "edges": [[i, j], ...]} in canonical order.
nlohmann::json to_json(const Graph& g);
Graph graph_from_json(const nlohmann::json& j);
Graph read_graph_file(const std::filesystem::path& path);
void write_graph_file(const std::filesystem::path& path, const Graph& g);

/// {"type":"quadratic","d":int,"Q":"scaled_identity","c":float} with
/// optional dense "Q_matrix", "b" and "c0".
Quadratic quadratic_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

struct DecentralizedSetup
{
    DualConsensusProblem problem;
    DualState initial;
};

struct SeparableSetup
{
    SeparableQuadraticProblem problem;
    SeparableState initial;
};

using ProblemSetup = std::variant<DecentralizedSetup, SeparableSetup>;

/// Problem spec: {"setting": "decentralized" | "separable", "graph": ...,
/// "functions": ..., "d": int, "seed": int, "init": ...}. "graph" is either a
/// graph object or {"circulant": {"n": int, "degree": int}}.
ProblemSetup problem_from_json(const nlohmann::json& j);

/// CSV with header iter,node,edge,grad_sq,suboptimality.
void write_trace_csv(std::ostream& out, const Trace& trace);
std::vector<TraceRow> read_trace_csv(std::istream& in);

/// Run metadata written next to a trace CSV.
nlohmann::json trace_sidecar(const Trace& trace);

} // namespace setcd
