#include <setcd/dual.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <setcd/error.hpp>

namespace setcd {

DualConsensusProblem::DualConsensusProblem(Graph graph, std::vector<Quadratic> functions)
    : graph_(std::move(graph))
    , sets_(neighbor_sets(graph_))
    , functions_(std::move(functions))
{
    if (static_cast<int>(functions_.size()) != graph_.num_nodes()) {
        throw Error(ErrorKind::DimensionMismatch, std::to_string(functions_.size()) +
                                                      " functions for " +
                                                      std::to_string(graph_.num_nodes()) + " nodes");
    }
    dim_ = functions_.front().dim();
    mu_min_ = functions_.front().mu();
    m_max_ = functions_.front().smoothness();
    for (const auto& f : functions_) {
        if (f.dim() != dim_) {
            throw Error(ErrorKind::DimensionMismatch,
                        "mixed dimensions " + std::to_string(dim_) + " and " + std::to_string(f.dim()));
        }
        mu_min_ = std::min(mu_min_, f.mu());
        m_max_ = std::max(m_max_, f.smoothness());
    }
    spectrum_ = laplacian_extremes(graph_);
    smoothness_ = spectrum_.gamma_max / mu_min_;
    sigma_a_ = spectrum_.gamma_min_plus / m_max_;

    Matrix q_sum = Matrix::Zero(dim_, dim_);
    Vector b_sum = Vector::Zero(dim_);
    for (const auto& f : functions_) {
        q_sum += f.q();
        b_sum += f.b();
    }
    Eigen::LLT<Matrix> llt(q_sum);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::SingularAggregate, "sum of Q_i");
    theta_star_ = -llt.solve(b_sum);
    double primal = 0.0;
    for (const auto& f : functions_) primal += f.value(theta_star_);
    f_star_ = -primal;
}

DualConsensusProblem::State DualConsensusProblem::zero_state() const
{
    return {Vector::Zero(static_cast<Eigen::Index>(num_coordinates()) * dim_),
            Vector::Zero(static_cast<Eigen::Index>(num_nodes()) * dim_)};
}

DualConsensusProblem::State DualConsensusProblem::state_from(Vector lambda) const
{
    if (lambda.size() != static_cast<Eigen::Index>(num_coordinates()) * dim_) {
        throw Error(ErrorKind::DimensionMismatch, "lambda has " + std::to_string(lambda.size()) + " entries");
    }
    State s{std::move(lambda), Vector::Zero(static_cast<Eigen::Index>(num_nodes()) * dim_)};
    recompute_aggregates(s);
    return s;
}

DualConsensusProblem::State DualConsensusProblem::gaussian_state(std::uint64_t seed, double scale) const
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, scale);
    Vector lambda(static_cast<Eigen::Index>(num_coordinates()) * dim_);
    for (auto& v : lambda) v = normal(rng);
    return state_from(std::move(lambda));
}

void DualConsensusProblem::recompute_aggregates(State& s) const
{
    s.z.setZero(static_cast<Eigen::Index>(num_nodes()) * dim_);
    for (int l = 0; l < num_coordinates(); ++l) {
        const auto& e = graph_.edges()[l];
        s.z.segment(e.lo * dim_, dim_) += s.lambda.segment(l * dim_, dim_);
        s.z.segment(e.hi * dim_, dim_) -= s.lambda.segment(l * dim_, dim_);
    }
}

double DualConsensusProblem::aggregate_drift(const State& s) const
{
    State fresh{s.lambda, {}};
    recompute_aggregates(fresh);
    return (fresh.z - s.z).cwiseAbs().maxCoeff();
}

void DualConsensusProblem::check_state(const State& s) const
{
    if (s.lambda.size() != static_cast<Eigen::Index>(num_coordinates()) * dim_ ||
        s.z.size() != static_cast<Eigen::Index>(num_nodes()) * dim_) {
        throw Error(ErrorKind::DimensionMismatch, "state does not match problem");
    }
}

void DualConsensusProblem::check_edge(int edge) const
{
    if (edge < 0 || edge >= num_coordinates()) {
        throw Error(ErrorKind::IndexOutOfRange, "edge " + std::to_string(edge));
    }
}

Vector DualConsensusProblem::coordinate_gradient(const State& s, int edge) const
{
    check_edge(edge);
    const auto& e = graph_.edges()[edge];
    Vector g(dim_);
    Vector tmp(dim_);
    functions_[e.lo].conjugate_gradient_into(s.z.segment(e.lo * dim_, dim_), g);
    functions_[e.hi].conjugate_gradient_into(s.z.segment(e.hi * dim_, dim_), tmp);
    g -= tmp;
    return g;
}

Vector DualConsensusProblem::full_gradient(const State& s) const
{
    check_state(s);
    std::vector<Vector> node_grads;
    node_grads.reserve(num_nodes());
    for (int i = 0; i < num_nodes(); ++i) {
        node_grads.push_back(functions_[i].conjugate_gradient(s.z.segment(i * dim_, dim_)));
    }
    Vector g(static_cast<Eigen::Index>(num_coordinates()) * dim_);
    for (int l = 0; l < num_coordinates(); ++l) {
        const auto& e = graph_.edges()[l];
        g.segment(l * dim_, dim_) = node_grads[e.lo] - node_grads[e.hi];
    }
    return g;
}

double DualConsensusProblem::apply_update(State& s, int edge, double eta) const
{
    if (!(eta > 0.0)) throw Error(ErrorKind::NonPositiveStep, "eta = " + std::to_string(eta));
    const Vector delta = -eta * coordinate_gradient(s, edge);
    const auto& e = graph_.edges()[edge];
    auto z_lo = s.z.segment(e.lo * dim_, dim_);
    auto z_hi = s.z.segment(e.hi * dim_, dim_);
    const double before = functions_[e.lo].conjugate_value(z_lo) + functions_[e.hi].conjugate_value(z_hi);
    s.lambda.segment(edge * dim_, dim_) += delta;
    z_lo += delta;
    z_hi -= delta;
    const double after = functions_[e.lo].conjugate_value(z_lo) + functions_[e.hi].conjugate_value(z_hi);
    return after - before;
}

double DualConsensusProblem::value(const State& s) const
{
    check_state(s);
    double total = 0.0;
    for (int i = 0; i < num_nodes(); ++i) total += functions_[i].conjugate_value(s.z.segment(i * dim_, dim_));
    return total;
}

double DualConsensusProblem::suboptimality(const State& s) const
{
    const double gap = value(s) - f_star_;
    if (gap < -1e-9 * std::max(1.0, std::abs(f_star_))) {
        throw Error(ErrorKind::NegativeSuboptimality, std::to_string(gap));
    }
    return gap;
}

std::vector<Vector> DualConsensusProblem::primal_recovery(const State& s) const
{
    check_state(s);
    std::vector<Vector> thetas;
    thetas.reserve(num_nodes());
    for (int i = 0; i < num_nodes(); ++i) {
        thetas.push_back(functions_[i].conjugate_gradient(s.z.segment(i * dim_, dim_)));
    }
    return thetas;
}

double DualConsensusProblem::duality_gap(const State& s) const
{
    const auto thetas = primal_recovery(s);
    Vector mean = Vector::Zero(dim_);
    for (const auto& t : thetas) mean += t;
    mean /= static_cast<double>(thetas.size());
    double primal = 0.0;
    for (const auto& f : functions_) primal += f.value(mean);
    return primal + value(s);
}

SeparableQuadraticProblem::SeparableQuadraticProblem(Graph carrier, Vector diag)
    : carrier_(std::move(carrier))
    , sets_(neighbor_sets(carrier_))
    , diag_(std::move(diag))
{
    if (diag_.size() != carrier_.num_edges()) {
        throw Error(ErrorKind::DimensionMismatch, std::to_string(diag_.size()) + " diagonal entries for " +
                                                      std::to_string(carrier_.num_edges()) + " coordinates");
    }
    if (!(diag_.array() > 0.0).all()) throw Error(ErrorKind::NotPositiveDefinite, "D must be positive");
}

SeparableQuadraticProblem::State SeparableQuadraticProblem::state_from(Vector x) const
{
    if (x.size() != num_coordinates()) {
        throw Error(ErrorKind::DimensionMismatch, "x has " + std::to_string(x.size()) + " entries");
    }
    return {std::move(x)};
}

void SeparableQuadraticProblem::check_coord(int coord) const
{
    if (coord < 0 || coord >= num_coordinates()) {
        throw Error(ErrorKind::IndexOutOfRange, "coordinate " + std::to_string(coord));
    }
}

Vector SeparableQuadraticProblem::coordinate_gradient(const State& s, int coord) const
{
    check_coord(coord);
    Vector g(1);
    g(0) = 2.0 * diag_(coord) * s.x(coord);
    return g;
}

double SeparableQuadraticProblem::apply_update(State& s, int coord, double eta) const
{
    if (!(eta > 0.0)) throw Error(ErrorKind::NonPositiveStep, "eta = " + std::to_string(eta));
    check_coord(coord);
    const double before = s.x(coord);
    const double after = before - eta * 2.0 * diag_(coord) * before;
    s.x(coord) = after;
    return diag_(coord) * (after * after - before * before);
}

double SeparableQuadraticProblem::value(const State& s) const
{
    return (diag_.array() * s.x.array().square()).sum();
}

SeparableQuadraticProblem separable_problem(const Graph& carrier, double mean, double stddev,
                                            std::uint64_t seed)
{
    if (!(mean > 0.0) || stddev < 0.0) {
        throw Error(ErrorKind::InvalidConfig, "need mean > 0 and std >= 0");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(mean, stddev);
    Vector diag(carrier.num_edges());
    for (auto& d : diag) {
        do {
            d = stddev == 0.0 ? mean : normal(rng);
        } while (!(d > 0.0));
    }
    return SeparableQuadraticProblem(carrier, std::move(diag));
}

SeparableState far_near_state(const SeparableQuadraticProblem& p, const std::vector<int>& far,
                              double near_value, double far_value)
{
    Vector x = Vector::Constant(p.num_coordinates(), near_value);
    for (int l : far) {
        if (l < 0 || l >= p.num_coordinates()) throw Error(ErrorKind::IndexOutOfRange, "coordinate " + std::to_string(l));
        x(l) = far_value;
    }
    return p.state_from(std::move(x));
}

Vector cycle_null_vector(const Graph& g)
{
    const int n = g.num_nodes();
    std::vector<int> parent(n, -1);
    std::vector<int> parent_edge(n, -1);
    std::vector<int> depth(n, -1);
    std::vector<char> tree_edge(g.num_edges(), 0);
    const SetSystem sets = neighbor_sets(g);

    std::vector<int> queue{0};
    depth[0] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int l : sets.sets[v]) {
            const int w = g.other_end(l, v);
            if (depth[w] < 0) {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                parent_edge[w] = l;
                tree_edge[l] = 1;
                queue.push_back(w);
            }
        }
    }

    const auto chord = std::find(tree_edge.begin(), tree_edge.end(), 0);
    if (chord == tree_edge.end()) return {};
    const int c = static_cast<int>(chord - tree_edge.begin());

    // Walk u -> ... -> lca -> ... -> v -> u, orienting each edge along the walk.
    Vector w = Vector::Zero(g.num_edges());
    auto orient = [&](int from, int l) { w(l) += g.sign(from, l); };
    int u = g.edges()[c].lo;
    int v = g.edges()[c].hi;
    std::vector<std::pair<int, int>> tail; // (from, edge) from v up to lca, reversed later
    while (u != v) {
        if (depth[u] >= depth[v]) {
            orient(u, parent_edge[u]);
            u = parent[u];
        } else {
            tail.emplace_back(parent[v], parent_edge[v]);
            v = parent[v];
        }
    }
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) orient(it->first, it->second);
    orient(g.edges()[c].hi, c);
    return w;
}

} // namespace setcd
