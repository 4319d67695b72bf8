#pragma once

#include <cstdint>

#include <setcd/dual.hpp>
#include <setcd/graph.hpp>
#include <setcd/objective.hpp>

namespace setcd {

/// Orthogonal projector onto range(A^T), built from the eigenvectors of
/// A^T A with eigenvalue above 1e-9 * lambda_max.
struct RangeProjector
{
    Matrix p;
    int rank = 0;
};

RangeProjector range_projector(const Graph& g);

struct ProjectorReport
{
    double idempotency_error;
    double symmetry_error;
    int rank;
    bool ok;
};

/// Checks P^2 = P and P = P^T within 1e-9 and the rank against `expected_rank`.
ProjectorReport check_projector(const RangeProjector& proj, int expected_rank);

/// sqrt(x^T P x). Throws NegativeQuadForm if the form is below -1e-12.
double seminorm_aa(const RangeProjector& proj, const VectorCRef& x);

/// sqrt(sum_i max_{l in S_i} x_l^2).
double norm_sm(const SetSystem& sets, const VectorCRef& x);

/// Euclidean norm of each length-d block.
Vector block_magnitudes(const VectorCRef& x, int block_dim);

enum class NormKind { Inf, One, Two };

/// sqrt(sum_i ||x restricted to S_i'||_kind^2); empty sets contribute 0.
double assignment_value(const Assignment& a, const VectorCRef& x, NormKind kind);

struct AssignmentBracket
{
    double min;
    double max;
    std::uint64_t argmin_mask;
    std::uint64_t argmax_mask;
};

/// Min and max of assignment_value(., x, One) over all 2^E assignments.
AssignmentBracket smno_dual_candidate(const Graph& g, const VectorCRef& x);

struct ChainReport
{
    bool ok = true;
    /// min over assignments of ||x||^2 - V_a^2 / N_max.
    double lower_slack = 0.0;
    /// min over assignments of V_a^2 - ||x||^2.
    double upper_slack = 0.0;
    /// max over assignments of |sum_i ||T_i' x||_2^2 - ||x||^2|.
    double partition_error = 0.0;
    /// min over sets and assignments of the l1/l2 sandwich slacks.
    double sandwich_slack = 0.0;
    std::uint64_t witness_mask = 0;
    Vector projected;
    std::uint64_t assignments = 0;
};

/// Projects x onto range(A^T), then checks for every assignment a
/// V_a^2 / N_max <= ||x||^2 <= V_a^2 with V_a = assignment_value(a, x, One).
ChainReport chain_inequality_check(const Graph& g, const RangeProjector& proj, const VectorCRef& x);

struct SmDualOptions
{
    int starts = 20;
    int steps = 1000;
    double step = 1e-2;
    int dual_steps = 3000;
};

struct SmDualEstimate
{
    /// z^T x for a feasible x (||x||_SM <= 1): a lower bound on ||z||*_SM.
    double value;
    /// ||c(beta)||_2 for a fractional assignment beta: an upper bound.
    double upper_bound;
    Vector witness;
};

/// Numerical sup of z^T x over the Set-Max unit ball.
///
/// Sign-aligned maximizers take x_l = sign(z_l) min(s_lo, s_hi) for per-set
/// levels s >= 0 with ||s||_2 <= 1, so the search runs over s: multi-start
/// projected supergradient ascent, plus the point recovered from the
/// fractional-assignment dual min_beta ||c(beta)||_2.
SmDualEstimate sm_dual_norm(const Graph& g, const VectorCRef& z, const SmDualOptions& opts = {},
                            std::uint64_t seed = 0);

inline constexpr int kMaxOracleEdges = 10;

struct DualBoundReport
{
    int samples = 0;
    int flagged = 0;
    /// min over samples of sm^2 - 1/2 min_a V_a^2 + tol.
    double worst_slack = 0.0;
    double max_oracle_gap = 0.0;
    Vector witness;
};

/// One-sided check of (||z||*_SM)^2 >= 1/2 (min_a V_a(z))^2 - tol with
/// tol = 1e-6 + 1e-3 * rhs, over every unit vector e_l and `samples`
/// Gaussian z. Throws TooManyEdges above kMaxOracleEdges.
DualBoundReport dual_lower_bound_check(const Graph& g, int samples, std::uint64_t seed, const SmDualOptions& opts = {});

/// ||P grad F - grad F||_2, applying P to each of the d component slices.
double grad_in_range_check(const DualConsensusProblem& p, const DualState& s, const RangeProjector& proj);

} // namespace setcd
