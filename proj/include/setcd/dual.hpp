#pragma once

#include <cstdint>
#include <vector>

#include <setcd/graph.hpp>
#include <setcd/objective.hpp>

namespace setcd {

/// Edge variables and the per-node aggregates z_i = sum_{l in S_i} A[i,l] lambda_l.
///
/// Both are stored flat: block l of `lambda` is lambda.segment(l*d, d) and
/// block i of `z` is z.segment(i*d, d).
struct DualState
{
    Vector lambda;
    Vector z;
};

/// Dual of the consensus problem min sum_i f_i(theta) over a graph:
/// F(lambda) = sum_i f_i*(z_i).
///
/// Constants: L = gamma_max / mu_min (smoothness), sigma_A = gamma_min_plus /
/// M_max (strong convexity on range(A^T)). The reference optimum F* is the
/// negated primal minimum, computed in closed form.
class DualConsensusProblem
{
public:
    using State = DualState;

    DualConsensusProblem(Graph graph, std::vector<Quadratic> functions);

    const Graph& graph() const noexcept { return graph_; }
    const SetSystem& sets() const noexcept { return sets_; }
    const std::vector<Quadratic>& functions() const noexcept { return functions_; }

    int num_nodes() const noexcept { return graph_.num_nodes(); }
    int num_coordinates() const noexcept { return graph_.num_edges(); }
    int block_dim() const noexcept { return dim_; }

    double smoothness() const noexcept { return smoothness_; }
    double sigma_a() const noexcept { return sigma_a_; }
    double gamma_min_plus() const noexcept { return spectrum_.gamma_min_plus; }
    double gamma_max() const noexcept { return spectrum_.gamma_max; }
    double mu_min() const noexcept { return mu_min_; }
    double m_max() const noexcept { return m_max_; }

    double optimal_value() const noexcept { return f_star_; }
    const Vector& primal_optimum() const noexcept { return theta_star_; }
    double primal_minimum() const noexcept { return -f_star_; }

    State zero_state() const;
    State state_from(Vector lambda) const;
    /// lambda entries i.i.d. N(0, scale^2).
    State gaussian_state(std::uint64_t seed, double scale = 1.0) const;

    void recompute_aggregates(State& s) const;
    /// max |z_stored - z_recomputed|.
    double aggregate_drift(const State& s) const;

    Vector coordinate_gradient(const State& s, int edge) const;
    /// Stacked E*d gradient.
    Vector full_gradient(const State& s) const;

    /// lambda_l -= eta * grad_l F, aggregates patched at both endpoints.
    /// Returns F(after) - F(before) evaluated on the two touched nodes.
    double apply_update(State& s, int edge, double eta) const;

    double value(const State& s) const;
    /// F(lambda) - F*. Throws NegativeSuboptimality below -1e-9 * max(1, |F*|).
    double suboptimality(const State& s) const;

    /// theta_i = grad f_i*(z_i).
    std::vector<Vector> primal_recovery(const State& s) const;
    /// sum_i f_i(theta_bar) + F(lambda) >= 0, theta_bar the mean recovered iterate.
    double duality_gap(const State& s) const;

private:
    void check_state(const State& s) const;
    void check_edge(int edge) const;

    Graph graph_;
    SetSystem sets_;
    std::vector<Quadratic> functions_;
    int dim_ = 0;
    LaplacianSpectrum spectrum_{};
    double mu_min_ = 0.0;
    double m_max_ = 0.0;
    double smoothness_ = 0.0;
    double sigma_a_ = 0.0;
    double f_star_ = 0.0;
    Vector theta_star_;
};

struct SeparableState
{
    Vector x;
};

/// F(x) = x^T D x with diagonal D > 0. Coordinates are the edges of a
/// carrier graph, so each coordinate lies in exactly two sets.
class SeparableQuadraticProblem
{
public:
    using State = SeparableState;

    SeparableQuadraticProblem(Graph carrier, Vector diag);

    const Graph& graph() const noexcept { return carrier_; }
    const SetSystem& sets() const noexcept { return sets_; }
    const Vector& diag() const noexcept { return diag_; }

    int num_nodes() const noexcept { return carrier_.num_nodes(); }
    int num_coordinates() const noexcept { return carrier_.num_edges(); }
    int block_dim() const noexcept { return 1; }

    double smoothness() const noexcept { return 2.0 * diag_.maxCoeff(); }
    double strong_convexity() const noexcept { return 2.0 * diag_.minCoeff(); }
    double optimal_value() const noexcept { return 0.0; }

    State state_from(Vector x) const;

    Vector coordinate_gradient(const State& s, int coord) const;
    double apply_update(State& s, int coord, double eta) const;
    double value(const State& s) const;
    double suboptimality(const State& s) const { return value(s); }

private:
    void check_coord(int coord) const;

    Graph carrier_;
    SetSystem sets_;
    Vector diag_;
};

/// Diagonal entries drawn from N(mean, std^2); non-positive draws are redrawn.
SeparableQuadraticProblem separable_problem(const Graph& carrier, double mean, double stddev,
                                            std::uint64_t seed);

/// Parameter-server start: coordinates in `far` set to `far_value`, the rest to `near_value`.
SeparableState far_near_state(const SeparableQuadraticProblem& p, const std::vector<int>& far,
                              double near_value = 1.0, double far_value = 100.0);

/// Null vector of the incidence operator supported on one cycle
/// (A w = 0, w != 0). Empty for trees.
Vector cycle_null_vector(const Graph& g);

} // namespace setcd
