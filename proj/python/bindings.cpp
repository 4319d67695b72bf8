#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <setcd/error.hpp>
#include <setcd/experiment.hpp>
#include <setcd/io.hpp>
#include <setcd/norms.hpp>
#include <setcd/rate.hpp>
#include <setcd/verify.hpp>

namespace py = pybind11;
using namespace setcd;

namespace {

py::object to_python(const nlohmann::json& j)
{
    return py::module_::import("json").attr("loads")(j.dump());
}

py::dict trace_dict(const Trace& t)
{
    std::vector<std::int64_t> iter;
    std::vector<int> node;
    std::vector<int> edge;
    std::vector<double> grad_sq;
    std::vector<double> subopt;
    for (const auto& r : t.rows) {
        iter.push_back(r.iter);
        node.push_back(r.node);
        edge.push_back(r.edge);
        grad_sq.push_back(r.grad_sq);
        subopt.push_back(r.suboptimality);
    }
    py::dict d;
    d["rule"] = std::string(to_string(t.rule));
    d["seed"] = t.seed;
    d["eta"] = t.eta;
    d["initial_suboptimality"] = t.initial_suboptimality;
    d["iter"] = iter;
    d["node"] = node;
    d["edge"] = edge;
    d["grad_sq"] = grad_sq;
    d["suboptimality"] = subopt;
    d["messages"] = t.messages;
    d["resyncs"] = t.resyncs;
    return d;
}

ExperimentOptions options(int seeds, std::int64_t iterations, std::uint64_t seed, unsigned threads)
{
    ExperimentOptions o;
    o.seeds = seeds;
    o.iterations = iterations;
    o.seed = seed;
    o.threads = threads;
    return o;
}

template <class P>
py::dict run_any(const P& p, const typename P::State& s, const std::string& rule, std::int64_t iterations,
                 std::uint64_t seed, std::optional<double> eta, std::int64_t record_every)
{
    RunConfig cfg;
    cfg.rule = parse_rule(rule);
    cfg.iterations = iterations;
    cfg.seed = seed;
    cfg.eta = eta;
    cfg.record_every = record_every;
    Trace t;
    {
        py::gil_scoped_release release;
        t = run(p, s, cfg);
    }
    return trace_dict(t);
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Set-wise coordinate descent core";
    py::register_exception<Error>(m, "SetcdError", PyExc_RuntimeError);

    py::class_<Graph>(m, "Graph")
        .def(py::init([](int n, const std::vector<std::pair<int, int>>& edges) { return Graph::build(n, edges); }),
             py::arg("n"), py::arg("edges"))
        .def_property_readonly("num_nodes", &Graph::num_nodes)
        .def_property_readonly("num_edges", &Graph::num_edges)
        .def_property_readonly("edges",
                               [](const Graph& g) {
                                   std::vector<std::pair<int, int>> out;
                                   for (const auto& e : g.edges()) out.emplace_back(e.lo, e.hi);
                                   return out;
                               })
        .def("degree", &Graph::degree)
        .def("incidence", [](const Graph& g) { return incidence_matrix(g); })
        .def("laplacian", [](const Graph& g) { return laplacian_matrix(g); })
        .def("spectrum",
             [](const Graph& g) {
                 const auto s = laplacian_extremes(g);
                 return std::make_pair(s.gamma_min_plus, s.gamma_max);
             })
        .def("to_json", [](const Graph& g) { return to_python(to_json(g)); })
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("__repr__", [](const Graph& g) {
            return "Graph(n=" + std::to_string(g.num_nodes()) + ", E=" + std::to_string(g.num_edges()) + ")";
        });

    m.def("circulant_regular", &circulant_regular, py::arg("n"), py::arg("degree"));
    m.def(
        "random_connected_graph",
        [](int n, int extra, std::uint64_t seed) {
            std::mt19937_64 rng(seed);
            return random_connected_graph(n, extra, rng);
        },
        py::arg("n"), py::arg("extra_edges") = 0, py::arg("seed") = 0);
    m.def("graph_from_json", [](const std::string& text) { return graph_from_json(nlohmann::json::parse(text)); });

    py::class_<Quadratic>(m, "Quadratic")
        .def(py::init<Matrix, Vector, double>(), py::arg("Q"), py::arg("b"), py::arg("c0") = 0.0)
        .def_static("scaled_identity", &Quadratic::scaled_identity, py::arg("dim"), py::arg("c"))
        .def_property_readonly("dim", &Quadratic::dim)
        .def_property_readonly("Q", &Quadratic::q)
        .def_property_readonly("b", &Quadratic::b)
        .def_property_readonly("mu", &Quadratic::mu)
        .def_property_readonly("smoothness", &Quadratic::smoothness)
        .def("value", &Quadratic::value)
        .def("gradient", &Quadratic::gradient)
        .def("conjugate_value", &Quadratic::conjugate_value)
        .def("conjugate_gradient", &Quadratic::conjugate_gradient)
        .def("minimizer", &Quadratic::minimizer);

    py::class_<DualState>(m, "DualState")
        .def_readonly("lam", &DualState::lambda)
        .def_readonly("z", &DualState::z);

    py::class_<DualConsensusProblem>(m, "DualConsensusProblem")
        .def(py::init<Graph, std::vector<Quadratic>>(), py::arg("graph"), py::arg("functions"))
        .def_property_readonly("graph", &DualConsensusProblem::graph)
        .def_property_readonly("num_nodes", &DualConsensusProblem::num_nodes)
        .def_property_readonly("num_coordinates", &DualConsensusProblem::num_coordinates)
        .def_property_readonly("block_dim", &DualConsensusProblem::block_dim)
        .def_property_readonly("smoothness", &DualConsensusProblem::smoothness)
        .def_property_readonly("sigma_a", &DualConsensusProblem::sigma_a)
        .def_property_readonly("optimal_value", &DualConsensusProblem::optimal_value)
        .def_property_readonly("primal_optimum", &DualConsensusProblem::primal_optimum)
        .def("zero_state", &DualConsensusProblem::zero_state)
        .def("state_from", &DualConsensusProblem::state_from, py::arg("lam"))
        .def("gaussian_state", &DualConsensusProblem::gaussian_state, py::arg("seed"), py::arg("scale") = 1.0)
        .def("coordinate_gradient", &DualConsensusProblem::coordinate_gradient)
        .def("full_gradient", &DualConsensusProblem::full_gradient)
        .def("value", &DualConsensusProblem::value)
        .def("suboptimality", &DualConsensusProblem::suboptimality)
        .def("duality_gap", &DualConsensusProblem::duality_gap)
        .def("primal_recovery", &DualConsensusProblem::primal_recovery)
        .def("run", &run_any<DualConsensusProblem>, py::arg("state"), py::arg("rule") = "su",
             py::arg("iterations") = 1000, py::arg("seed") = 1, py::arg("eta") = py::none(),
             py::arg("record_every") = 1);

    py::class_<SeparableState>(m, "SeparableState").def_readonly("x", &SeparableState::x);

    py::class_<SeparableQuadraticProblem>(m, "SeparableQuadraticProblem")
        .def(py::init<Graph, Vector>(), py::arg("carrier"), py::arg("diag"))
        .def_property_readonly("diag", &SeparableQuadraticProblem::diag)
        .def_property_readonly("smoothness", &SeparableQuadraticProblem::smoothness)
        .def_property_readonly("strong_convexity", &SeparableQuadraticProblem::strong_convexity)
        .def("state_from", &SeparableQuadraticProblem::state_from, py::arg("x"))
        .def("coordinate_gradient", &SeparableQuadraticProblem::coordinate_gradient)
        .def("value", &SeparableQuadraticProblem::value)
        .def("run", &run_any<SeparableQuadraticProblem>, py::arg("state"), py::arg("rule") = "su",
             py::arg("iterations") = 1000, py::arg("seed") = 1, py::arg("eta") = py::none(),
             py::arg("record_every") = 1);

    m.def("range_projector", [](const Graph& g) { return range_projector(g).p; });
    m.def("norm_sm", [](const Graph& g, const Vector& x) { return norm_sm(neighbor_sets(g), x); });
    m.def("smno_dual_candidate", [](const Graph& g, const Vector& x) {
        const auto b = smno_dual_candidate(g, x);
        return std::make_pair(b.min, b.max);
    });
    m.def(
        "sm_dual_norm",
        [](const Graph& g, const Vector& z, std::uint64_t seed) {
            const auto e = sm_dual_norm(g, z, {}, seed);
            return std::make_pair(e.value, e.upper_bound);
        },
        py::arg("graph"), py::arg("z"), py::arg("seed") = 0);

    m.def(
        "estimate_rate",
        [](const std::vector<double>& iters, const std::vector<double>& values, double window) {
            return to_python(to_json(estimate_rate(iters, values, window)));
        },
        py::arg("iters"), py::arg("suboptimality"), py::arg("window_fraction") = 1.0 / 3.0);

    m.def(
        "experiment_decentralized",
        [](int degree, int seeds, std::int64_t iterations, std::uint64_t seed, unsigned threads) {
            ExperimentSummary s;
            {
                py::gil_scoped_release release;
                s = experiment_decentralized(degree, options(seeds, iterations, seed, threads));
            }
            return to_python(to_json(s));
        },
        py::arg("degree"), py::arg("seeds") = kDefaultSeeds, py::arg("iterations") = 0, py::arg("seed") = 1,
        py::arg("threads") = 0);
    m.def(
        "experiment_paramserver",
        [](int n_sets, int set_size, int seeds, std::int64_t iterations, std::uint64_t seed, unsigned threads) {
            ExperimentSummary s;
            {
                py::gil_scoped_release release;
                s = experiment_paramserver(n_sets, set_size, options(seeds, iterations, seed, threads));
            }
            return to_python(to_json(s));
        },
        py::arg("n_sets"), py::arg("set_size"), py::arg("seeds") = kDefaultSeeds, py::arg("iterations") = 0,
        py::arg("seed") = 1, py::arg("threads") = 0);

    m.def(
        "verify",
        [](const std::string& level, std::uint64_t seed) {
            VerifyReport r;
            {
                py::gil_scoped_release release;
                r = verify(parse_verify_level(level), seed);
            }
            return to_python(to_json(r));
        },
        py::arg("level") = "fast", py::arg("seed") = 0);
}
