#include <setcd/graph.hpp>

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include <setcd/error.hpp>

namespace setcd {

namespace {

bool is_connected(int n, const std::vector<Edge>& edges)
{
    if (n <= 1) return true;
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : edges) {
        adj[e.lo].push_back(e.hi);
        adj[e.hi].push_back(e.lo);
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
        }
    }
    return count == n;
}

} // namespace

Graph::Graph(int n, std::vector<Edge> edges)
    : n_(n)
    , edges_(std::move(edges))
{}

Graph Graph::build(int n, const std::vector<std::pair<int, int>>& edge_list)
{
    if (n < 1) throw Error(ErrorKind::NodeOutOfRange, "graph needs at least one node");
    std::vector<Edge> edges;
    edges.reserve(edge_list.size());
    for (const auto& [i, j] : edge_list) {
        if (i < 0 || j < 0 || i >= n || j >= n) {
            throw Error(ErrorKind::NodeOutOfRange,
                        "edge (" + std::to_string(i) + "," + std::to_string(j) + ") with n=" +
                            std::to_string(n));
        }
        if (i == j) throw Error(ErrorKind::SelfLoop, "node " + std::to_string(i));
        edges.push_back({std::min(i, j), std::max(i, j)});
    }
    std::sort(edges.begin(), edges.end());
    const auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end()) {
        throw Error(ErrorKind::DuplicateEdge,
                    "(" + std::to_string(dup->lo) + "," + std::to_string(dup->hi) + ")");
    }
    if (!is_connected(n, edges)) {
        throw Error(ErrorKind::DisconnectedGraph, "n=" + std::to_string(n) + ", E=" +
                                                      std::to_string(edges.size()));
    }
    return Graph(n, std::move(edges));
}

const Edge& Graph::edge(int l) const
{
    if (l < 0 || l >= num_edges()) throw Error(ErrorKind::IndexOutOfRange, "edge " + std::to_string(l));
    return edges_[l];
}

std::optional<int> Graph::edge_index(int i, int j) const
{
    const Edge key{std::min(i, j), std::max(i, j)};
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<int>(it - edges_.begin());
}

int Graph::degree(int i) const
{
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                          [i](const Edge& e) { return e.lo == i || e.hi == i; }));
}

double Graph::sign(int node, int l) const
{
    const auto& e = edge(l);
    if (node == e.lo) return 1.0;
    if (node == e.hi) return -1.0;
    return 0.0;
}

int Graph::other_end(int l, int node) const
{
    const auto& e = edge(l);
    return node == e.lo ? e.hi : e.lo;
}

Graph circulant_regular(int n, int degree)
{
    if (degree % 2 != 0) throw Error(ErrorKind::OddDegree, "degree " + std::to_string(degree));
    if (degree < 2 || degree > n - 1) {
        throw Error(ErrorKind::DegreeTooLarge,
                    "degree " + std::to_string(degree) + " with n=" + std::to_string(n));
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int k = 1; k <= degree / 2; ++k) {
            const int j = (i + k) % n;
            if (i < j) edges.emplace_back(i, j);
            else edges.emplace_back(j, i);
        }
    }
    return Graph::build(n, edges);
}

Graph random_connected_graph(int n, int extra_edges, std::mt19937_64& rng)
{
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<int, int>> edges;
    for (int k = 1; k < n; ++k) {
        std::uniform_int_distribution<int> parent(0, k - 1);
        edges.emplace_back(perm[k], perm[parent(rng)]);
    }
    std::vector<std::pair<int, int>> chords;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const bool in_tree = std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
                return (e.first == i && e.second == j) || (e.first == j && e.second == i);
            });
            if (!in_tree) chords.emplace_back(i, j);
        }
    }
    std::shuffle(chords.begin(), chords.end(), rng);
    const auto take = std::min<std::size_t>(std::max(extra_edges, 0), chords.size());
    edges.insert(edges.end(), chords.begin(), chords.begin() + static_cast<std::ptrdiff_t>(take));
    return Graph::build(n, edges);
}

Eigen::MatrixXd incidence_matrix(const Graph& g)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.num_nodes(), g.num_edges());
    for (int l = 0; l < g.num_edges(); ++l) {
        a(g.edges()[l].lo, l) = 1.0;
        a(g.edges()[l].hi, l) = -1.0;
    }
    return a;
}

Eigen::MatrixXd laplacian_matrix(const Graph& g)
{
    const Eigen::MatrixXd a = incidence_matrix(g);
    return a * a.transpose();
}

LaplacianSpectrum laplacian_extremes(const Graph& g)
{
    if (g.num_nodes() < 2) throw Error(ErrorKind::EigensolverFailure, "single-node graph has no positive eigenvalue");
    const Eigen::MatrixXd lap = laplacian_matrix(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigensolverFailure, "Laplacian");
    const auto& values = solver.eigenvalues();
    const double gamma_max = values(values.size() - 1);
    const double residual = (lap * solver.eigenvectors() -
                             solver.eigenvectors() * values.asDiagonal()).colwise().norm().maxCoeff();
    if (!(residual <= 1e-8 * gamma_max)) {
        throw Error(ErrorKind::EigensolverFailure, "residual " + std::to_string(residual));
    }
    const double tol_zero = 1e-9 * gamma_max;
    const auto zeros = (values.array() <= tol_zero).count();
    if (zeros != 1) {
        throw Error(ErrorKind::MultipleZeroEigenvalues, std::to_string(zeros) + " eigenvalues below " +
                                                            std::to_string(tol_zero));
    }
    return {values(1), gamma_max};
}

SetSystem neighbor_sets(const Graph& g)
{
    SetSystem s;
    s.sets.assign(g.num_nodes(), {});
    for (int l = 0; l < g.num_edges(); ++l) {
        s.sets[g.edges()[l].lo].push_back(l);
        s.sets[g.edges()[l].hi].push_back(l);
    }
    s.degrees.reserve(s.sets.size());
    for (const auto& set : s.sets) {
        s.degrees.push_back(static_cast<int>(set.size()));
        s.max_degree = std::max(s.max_degree, s.degrees.back());
    }
    return s;
}

Assignment Assignment::from_mask(const Graph& g, std::uint64_t mask)
{
    Assignment a;
    a.owner.resize(g.num_edges());
    a.owned.assign(g.num_nodes(), {});
    a.complement_owned.assign(g.num_nodes(), {});
    for (int l = 0; l < g.num_edges(); ++l) {
        const auto& e = g.edges()[l];
        const bool high = (mask >> l) & 1U;
        const int own = high ? e.hi : e.lo;
        const int other = high ? e.lo : e.hi;
        a.owner[l] = own;
        a.owned[own].push_back(l);
        a.complement_owned[other].push_back(l);
    }
    return a;
}

Assignment Assignment::complement(const Graph& g) const
{
    std::uint64_t mask = 0;
    for (int l = 0; l < g.num_edges(); ++l) {
        if (owner[l] == g.edges()[l].lo) mask |= std::uint64_t{1} << l;
    }
    return from_mask(g, mask);
}

std::vector<Assignment> enumerate_assignments(const Graph& g, int max_edges)
{
    if (g.num_edges() > max_edges || g.num_edges() > 62) {
        throw Error(ErrorKind::TooManyEdges,
                    std::to_string(g.num_edges()) + " > " + std::to_string(max_edges));
    }
    const std::uint64_t count = std::uint64_t{1} << g.num_edges();
    std::vector<Assignment> out;
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) out.push_back(Assignment::from_mask(g, mask));
    return out;
}

std::vector<int> perfect_matching_circulant(const Graph& g)
{
    const int n = g.num_nodes();
    if (n % 2 != 0) throw Error(ErrorKind::NoMatchingAvailable, "odd node count " + std::to_string(n));
    std::vector<int> matched;
    for (int k = 0; k < n / 2; ++k) {
        const auto l = g.edge_index(2 * k, 2 * k + 1);
        if (!l) {
            throw Error(ErrorKind::NoMatchingAvailable,
                        "missing edge (" + std::to_string(2 * k) + "," + std::to_string(2 * k + 1) + ")");
        }
        matched.push_back(*l);
    }
    return matched;
}

} // namespace setcd
