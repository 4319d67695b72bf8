#include <setcd/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <setcd/error.hpp>

namespace setcd {

namespace {

struct Scale
{
    int gradient_states;
    int axiom_samples;
    int chain_vectors;
    int dual_bound_samples;
};

Scale scale_for(VerifyLevel level)
{
    if (level == VerifyLevel::Full) return {50, 10000, 1000, 100};
    return {10, 1000, 100, 20};
}

Vector gaussian(std::mt19937_64& rng, Eigen::Index size)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(size);
    for (auto& x : v) x = normal(rng);
    return v;
}

DualConsensusProblem random_problem(const Graph& g, int dim, std::mt19937_64& rng)
{
    std::vector<Quadratic> fs;
    for (int i = 0; i < g.num_nodes(); ++i) {
        Matrix m = Eigen::Map<Matrix>(gaussian(rng, dim * dim).data(), dim, dim);
        Matrix q = m.transpose() * m + 0.5 * Matrix::Identity(dim, dim);
        fs.emplace_back(std::move(q), gaussian(rng, dim));
    }
    return DualConsensusProblem(g, std::move(fs));
}

bool has_cycle(const Graph& g)
{
    return g.num_edges() >= g.num_nodes();
}

CheckResult projector_check(const Graph& g, const RangeProjector& proj)
{
    CheckResult r{"projector", "", true, 0.0, 1, "", {}};
    const auto rep = check_projector(proj, g.num_nodes() - 1);
    r.passed = rep.ok;
    r.worst_slack = 1e-9 - std::max(rep.idempotency_error, rep.symmetry_error);
    r.detail = "rank " + std::to_string(rep.rank);
    return r;
}

CheckResult gradient_range_check(const Graph& g, const RangeProjector& proj, int states, std::mt19937_64& rng)
{
    CheckResult r{"gradient_in_range", "", true, std::numeric_limits<double>::infinity(), 0, "", {}};
    const Vector cycle = cycle_null_vector(g);
    for (int dim : {1, 3}) {
        const auto p = random_problem(g, dim, rng);
        for (int k = 0; k < states; ++k) {
            Vector lambda = gaussian(rng, static_cast<Eigen::Index>(g.num_edges()) * dim);
            // half the states carry a null-space component
            if (cycle.size() > 0 && k % 2 == 1) {
                for (int l = 0; l < g.num_edges(); ++l) lambda.segment(l * dim, dim).array() += 3.0 * cycle(l);
            }
            const auto s = p.state_from(std::move(lambda));
            const Vector grad = p.full_gradient(s);
            const double tol = 1e-9 * (1.0 + grad.norm());
            const double residual = grad_in_range_check(p, s, proj);
            // seminorm of each component slice equals its Euclidean norm
            double seminorm_gap = 0.0;
            for (int c = 0; c < dim; ++c) {
                Vector slice(g.num_edges());
                for (int l = 0; l < g.num_edges(); ++l) slice(l) = grad(l * dim + c);
                seminorm_gap = std::max(seminorm_gap, std::abs(seminorm_aa(proj, slice) - slice.norm()));
            }
            const double slack = tol - std::max(residual, seminorm_gap);
            ++r.samples;
            if (slack < r.worst_slack) {
                r.worst_slack = slack;
                r.witness = s.lambda;
            }
        }
    }
    r.passed = r.worst_slack >= 0.0;
    return r;
}

CheckResult sm_axioms_check(const Graph& g, int samples, std::mt19937_64& rng)
{
    CheckResult r{"sm_norm_axioms", "", true, std::numeric_limits<double>::infinity(), 0, "", {}};
    const SetSystem sets = neighbor_sets(g);
    std::normal_distribution<double> scalar(0.0, 3.0);
    const auto track = [&](double slack, const Vector& x) {
        if (slack < r.worst_slack) {
            r.worst_slack = slack;
            r.witness = x;
        }
    };
    const Vector zero = Vector::Zero(g.num_edges());
    track(1e-10 - norm_sm(sets, zero), zero);
    for (int k = 0; k < samples; ++k) {
        const Vector x = gaussian(rng, g.num_edges());
        const Vector y = gaussian(rng, g.num_edges());
        const double t = scalar(rng);
        const double nx = norm_sm(sets, x);
        const double ny = norm_sm(sets, y);
        track(1e-10 * (1.0 + nx + ny) - (norm_sm(sets, x + y) - nx - ny), x);
        track(1e-10 * (1.0 + std::abs(t) * nx) - std::abs(norm_sm(sets, t * x) - std::abs(t) * nx), x);
        // definiteness: a nonzero vector has positive norm
        track(nx > 0.0 ? 1e-10 : -1.0, x);
        ++r.samples;
    }
    r.passed = r.worst_slack >= 0.0;
    return r;
}

CheckResult chain_check(const Graph& g, const RangeProjector& proj, int vectors, std::mt19937_64& rng)
{
    CheckResult r{"chain_inequality", "", true, std::numeric_limits<double>::infinity(), 0, "", {}};
    if (g.num_edges() > 12) {
        r.detail = "skipped: more than 12 edges";
        r.worst_slack = 0.0;
        return r;
    }
    std::uint64_t assignments = 0;
    const auto consider = [&](const Vector& x) {
        const auto rep = chain_inequality_check(g, proj, x);
        const double tol = 1e-12 * (1.0 + rep.projected.squaredNorm());
        const double slack = std::min({rep.lower_slack, rep.upper_slack, rep.sandwich_slack, tol - rep.partition_error});
        assignments += rep.assignments;
        ++r.samples;
        if (!rep.ok) r.passed = false;
        if (slack < r.worst_slack) {
            r.worst_slack = slack;
            r.witness = rep.projected;
        }
    };
    for (int l = 0; l < g.num_edges(); ++l) consider(Vector::Unit(g.num_edges(), l));
    consider(Vector::Ones(g.num_edges()));
    for (int k = 0; k < vectors; ++k) consider(gaussian(rng, g.num_edges()));
    r.detail = std::to_string(assignments) + " assignment evaluations";
    return r;
}

CheckResult null_vector_check(const Graph& g, const RangeProjector& proj, std::mt19937_64& rng)
{
    CheckResult r{"cycle_null_vector", "", true, 0.0, 0, "", {}};
    if (!has_cycle(g)) {
        r.detail = "tree: no cycle";
        return r;
    }
    const Vector w = cycle_null_vector(g);
    r.witness = w;
    const double wn = w.norm();
    // the quadratic form is zero to round-off; its square root only to sqrt(round-off)
    const double semi = seminorm_aa(proj, w);
    const double image = (proj.p * w).norm();
    double slack = std::min({wn - 1e-9, 1e-9 * wn - image, 1e-12 * wn * wn - semi * semi});
    for (int dim : {1, 3}) {
        const auto p = random_problem(g, dim, rng);
        for (int k = 0; k < 5; ++k) {
            const auto s = p.gaussian_state(rng());
            Vector lifted = s.lambda;
            for (int l = 0; l < g.num_edges(); ++l) lifted.segment(l * dim, dim).array() += w(l);
            const double f0 = p.value(s);
            const double f1 = p.value(p.state_from(std::move(lifted)));
            slack = std::min(slack, 1e-9 * std::max(1.0, std::abs(f0)) - std::abs(f1 - f0));
            ++r.samples;
        }
    }
    r.worst_slack = slack;
    r.passed = slack >= 0.0;
    r.detail = "|w| = " + std::to_string(wn);
    return r;
}

CheckResult dual_lower_bound(const Graph& g, int samples, std::uint64_t seed)
{
    CheckResult r{"sm_dual_lower_bound", "", true, 0.0, 0, "", {}};
    if (g.num_edges() > kMaxOracleEdges) {
        r.detail = "skipped: more than " + std::to_string(kMaxOracleEdges) + " edges";
        return r;
    }
    const auto rep = dual_lower_bound_check(g, samples, seed);
    r.samples = rep.samples;
    r.worst_slack = rep.worst_slack;
    r.passed = rep.flagged == 0;
    r.witness = rep.witness;
    r.detail = std::to_string(rep.flagged) + " flagged, oracle gap " + std::to_string(rep.max_oracle_gap);
    return r;
}

CheckResult corrupted_projector_check(const Graph& g, const RangeProjector& proj)
{
    CheckResult r{"corrupted_projector_rejected", "", false, 0.0, 1, "", {}};
    RangeProjector bad = proj;
    bad.p(0, 0) += 0.25;
    try {
        require_projector(bad, g.num_nodes() - 1);
        r.detail = "corruption not detected";
    } catch (const Error& e) {
        r.passed = e.kind() == ErrorKind::InequalityViolated;
        r.detail = e.what();
    }
    return r;
}

std::string describe(const Graph& g, const std::string& name)
{
    return name + " (n=" + std::to_string(g.num_nodes()) + ", E=" + std::to_string(g.num_edges()) + ")";
}

} // namespace

VerifyLevel parse_verify_level(std::string_view name)
{
    if (name == "fast") return VerifyLevel::Fast;
    if (name == "full") return VerifyLevel::Full;
    throw Error(ErrorKind::InvalidConfig, "unknown verify level '" + std::string(name) + "'");
}

bool VerifyReport::passed() const
{
    return failures() == 0;
}

int VerifyReport::failures() const
{
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

void require_projector(const RangeProjector& proj, int expected_rank)
{
    const auto rep = check_projector(proj, expected_rank);
    if (!rep.ok) {
        throw Error(ErrorKind::InequalityViolated,
                    "projector: idempotency error " + std::to_string(rep.idempotency_error) + ", symmetry error " +
                        std::to_string(rep.symmetry_error) + ", rank " + std::to_string(rep.rank) + " (expected " +
                        std::to_string(expected_rank) + ")");
    }
}

VerifyReport verify(VerifyLevel level, std::uint64_t seed)
{
    const auto start = std::chrono::steady_clock::now();
    const Scale scale = scale_for(level);
    std::mt19937_64 rng(seed);

    std::vector<std::pair<std::string, Graph>> graphs{
        {"P2", Graph::build(2, {{0, 1}})},
        {"K3", Graph::build(3, {{0, 1}, {0, 2}, {1, 2}})},
        {"P3", Graph::build(3, {{0, 1}, {1, 2}})},
    };
    if (level == VerifyLevel::Full) {
        graphs.emplace_back("star4", Graph::build(4, {{0, 1}, {0, 2}, {0, 3}}));
        graphs.emplace_back("C4", Graph::build(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}));
        graphs.emplace_back("K4", Graph::build(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
        const std::vector<std::pair<int, int>> random_shapes{{5, 1}, {5, 3}, {6, 0}, {6, 2}, {6, 4}, {6, 6}};
        int k = 0;
        for (auto [n, extra] : random_shapes) {
            graphs.emplace_back("random" + std::to_string(k++), random_connected_graph(n, extra, rng));
        }
    }

    VerifyReport report;
    report.level = level;
    report.seed = seed;
    bool negative_done = false;
    for (const auto& [name, g] : graphs) {
        const auto proj = range_projector(g);
        const std::string label = describe(g, name);
        std::vector<CheckResult> results;
        results.push_back(projector_check(g, proj));
        results.push_back(gradient_range_check(g, proj, scale.gradient_states, rng));
        results.push_back(sm_axioms_check(g, scale.axiom_samples, rng));
        results.push_back(chain_check(g, proj, scale.chain_vectors, rng));
        results.push_back(null_vector_check(g, proj, rng));
        results.push_back(dual_lower_bound(g, scale.dual_bound_samples, rng()));
        if (!negative_done && g.num_edges() >= 2) {
            results.push_back(corrupted_projector_check(g, proj));
            negative_done = true;
        }
        for (auto& r : results) {
            r.graph = label;
            report.checks.push_back(std::move(r));
        }
    }
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::json to_json(const VerifyReport& report)
{
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json witness = nlohmann::json::array();
        for (double v : c.witness) witness.push_back(v);
        checks.push_back({{"name", c.name},
                          {"graph", c.graph},
                          {"passed", c.passed},
                          {"worst_slack", std::isfinite(c.worst_slack) ? nlohmann::json(c.worst_slack)
                                                                       : nlohmann::json(nullptr)},
                          {"samples", c.samples},
                          {"detail", c.detail},
                          {"witness", witness}});
    }
    return {{"level", report.level == VerifyLevel::Full ? "full" : "fast"},
            {"seed", report.seed},
            {"passed", report.passed()},
            {"failures", report.failures()},
            {"seconds", report.seconds},
            {"checks", checks}};
}

} // namespace setcd
