#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace setcd {

/// Undirected edge with `lo < hi`.
struct Edge
{
    int lo;
    int hi;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Connected undirected graph with canonical edge order.
///
/// Edges are stored with the lower endpoint first and sorted
/// lexicographically; the position of an edge in that sequence is its
/// index. The incidence sign of an edge is +1 at `lo` and -1 at `hi`.
class Graph
{
public:
    /// Validates and canonicalizes `edge_list`. Throws SelfLoop,
    /// DuplicateEdge, NodeOutOfRange or DisconnectedGraph.
    static Graph build(int n, const std::vector<std::pair<int, int>>& edge_list);

    int num_nodes() const noexcept { return n_; }
    int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(int l) const;

    std::optional<int> edge_index(int i, int j) const;
    int degree(int i) const;

    /// Entry A[node, l] of the incidence matrix.
    double sign(int node, int l) const;

    /// Endpoint of edge `l` other than `node`.
    int other_end(int l, int node) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    Graph(int n, std::vector<Edge> edges);

    int n_ = 0;
    std::vector<Edge> edges_;
};

/// Circulant graph: node i is joined to i +- 1, ..., i +- degree/2 (mod n).
Graph circulant_regular(int n, int degree);

/// Random spanning tree plus `extra_edges` distinct random chords (clamped
/// at the complete graph).
Graph random_connected_graph(int n, int extra_edges, std::mt19937_64& rng);

/// Dense n x E incidence matrix.
Eigen::MatrixXd incidence_matrix(const Graph& g);

/// A A^T, i.e. the combinatorial Laplacian.
Eigen::MatrixXd laplacian_matrix(const Graph& g);

struct LaplacianSpectrum
{
    double gamma_min_plus;
    double gamma_max;
};

/// Smallest strictly positive and largest eigenvalue of A A^T. An eigenvalue
/// counts as zero below 1e-9 * gamma_max; exactly one zero is required.
LaplacianSpectrum laplacian_extremes(const Graph& g);

/// The coordinate sets S_i: indices of edges incident to each node.
struct SetSystem
{
    std::vector<std::vector<int>> sets;
    std::vector<int> degrees;
    int max_degree = 0;

    int num_sets() const noexcept { return static_cast<int>(sets.size()); }
};

SetSystem neighbor_sets(const Graph& g);

/// Each edge owned by exactly one of its endpoints. `owned[i]` is S_i',
/// `complement_owned[i]` is S_i minus S_i'.
struct Assignment
{
    std::vector<int> owner;
    std::vector<std::vector<int>> owned;
    std::vector<std::vector<int>> complement_owned;

    /// Bit l of `mask` clear: edge l owned by its low endpoint, set: by its high one.
    static Assignment from_mask(const Graph& g, std::uint64_t mask);

    /// The assignment giving every edge to the opposite endpoint.
    Assignment complement(const Graph& g) const;
};

inline constexpr int kMaxEnumeratedEdges = 16;

/// All 2^E assignments in mask order. Throws TooManyEdges when E > max_edges.
std::vector<Assignment> enumerate_assignments(const Graph& g,
                                              int max_edges = kMaxEnumeratedEdges);

/// Edges (2k, 2k+1): a perfect matching through the offset-1 ring edges.
std::vector<int> perfect_matching_circulant(const Graph& g);

} // namespace setcd
