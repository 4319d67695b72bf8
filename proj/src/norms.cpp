#include <setcd/norms.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include <setcd/error.hpp>

namespace setcd {

RangeProjector range_projector(const Graph& g)
{
    const Matrix a = incidence_matrix(g);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.transpose() * a);
    if (solver.info() != Eigen::Success) throw Error(ErrorKind::EigensolverFailure, "A^T A");
    const auto& values = solver.eigenvalues();
    const double tol = 1e-9 * std::max(values.maxCoeff(), 1.0);
    RangeProjector out;
    out.p = Matrix::Zero(g.num_edges(), g.num_edges());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (values(k) > tol) {
            out.p += solver.eigenvectors().col(k) * solver.eigenvectors().col(k).transpose();
            ++out.rank;
        }
    }
    return out;
}

ProjectorReport check_projector(const RangeProjector& proj, int expected_rank)
{
    ProjectorReport r{};
    r.idempotency_error = (proj.p * proj.p - proj.p).cwiseAbs().maxCoeff();
    r.symmetry_error = (proj.p - proj.p.transpose()).cwiseAbs().maxCoeff();
    r.rank = static_cast<int>(std::lround(proj.p.trace()));
    r.ok = r.idempotency_error <= 1e-9 && r.symmetry_error <= 1e-9 && r.rank == expected_rank &&
           proj.rank == expected_rank;
    return r;
}

double seminorm_aa(const RangeProjector& proj, const VectorCRef& x)
{
    if (x.size() != proj.p.rows()) throw Error(ErrorKind::DimensionMismatch, "x vs projector");
    const double form = x.dot(proj.p * x);
    if (form < -1e-12) throw Error(ErrorKind::NegativeQuadForm, std::to_string(form));
    return std::sqrt(std::max(form, 0.0));
}

double norm_sm(const SetSystem& sets, const VectorCRef& x)
{
    double total = 0.0;
    for (const auto& set : sets.sets) {
        double best = 0.0;
        for (int l : set) {
            if (l >= x.size()) throw Error(ErrorKind::DimensionMismatch, "x shorter than set indices");
            best = std::max(best, x(l) * x(l));
        }
        total += best;
    }
    return std::sqrt(total);
}

Vector block_magnitudes(const VectorCRef& x, int block_dim)
{
    if (block_dim <= 0 || x.size() % block_dim != 0) {
        throw Error(ErrorKind::DimensionMismatch, "length not a multiple of the block size");
    }
    const Eigen::Index blocks = x.size() / block_dim;
    Vector out(blocks);
    for (Eigen::Index l = 0; l < blocks; ++l) out(l) = x.segment(l * block_dim, block_dim).norm();
    return out;
}

double assignment_value(const Assignment& a, const VectorCRef& x, NormKind kind)
{
    if (x.size() != static_cast<Eigen::Index>(a.owner.size())) {
        throw Error(ErrorKind::DimensionMismatch, "x vs assignment");
    }
    double total = 0.0;
    for (const auto& set : a.owned) {
        double part = 0.0;
        for (int l : set) {
            const double v = std::abs(x(l));
            switch (kind) {
                case NormKind::Inf: part = std::max(part, v); break;
                case NormKind::One: part += v; break;
                case NormKind::Two: part += v * v; break;
            }
        }
        total += kind == NormKind::Two ? part : part * part;
    }
    return std::sqrt(total);
}

namespace {

void require_enumerable(const Graph& g, int cap)
{
    if (g.num_edges() > cap) {
        throw Error(ErrorKind::TooManyEdges, std::to_string(g.num_edges()) + " > " + std::to_string(cap));
    }
}

/// Squared l1 assignment value for the assignment encoded by `mask`.
double l1_value_sq(const Graph& g, const VectorCRef& x, std::uint64_t mask, std::vector<double>& sums)
{
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int l = 0; l < g.num_edges(); ++l) {
        const auto& e = g.edges()[l];
        sums[((mask >> l) & 1U) ? e.hi : e.lo] += std::abs(x(l));
    }
    double total = 0.0;
    for (double s : sums) total += s * s;
    return total;
}

} // namespace

AssignmentBracket smno_dual_candidate(const Graph& g, const VectorCRef& x)
{
    require_enumerable(g, kMaxEnumeratedEdges);
    if (x.size() != g.num_edges()) throw Error(ErrorKind::DimensionMismatch, "x vs graph");
    std::vector<double> sums(g.num_nodes());
    AssignmentBracket out{std::numeric_limits<double>::infinity(), -1.0, 0, 0};
    const std::uint64_t count = std::uint64_t{1} << g.num_edges();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        const double v = l1_value_sq(g, x, mask, sums);
        if (v < out.min) {
            out.min = v;
            out.argmin_mask = mask;
        }
        if (v > out.max) {
            out.max = v;
            out.argmax_mask = mask;
        }
    }
    out.min = std::sqrt(out.min);
    out.max = std::sqrt(out.max);
    return out;
}

ChainReport chain_inequality_check(const Graph& g, const RangeProjector& proj, const VectorCRef& x)
{
    require_enumerable(g, kMaxEnumeratedEdges);
    if (x.size() != g.num_edges()) throw Error(ErrorKind::DimensionMismatch, "x vs graph");
    ChainReport r;
    r.projected = proj.p * x;
    const int n = g.num_nodes();
    const double n_max = neighbor_sets(g).max_degree;
    const double norm_sq = r.projected.squaredNorm();
    const double tol = 1e-12 * (1.0 + norm_sq);

    std::vector<double> l1(n);
    std::vector<double> l2(n);
    std::vector<int> size(n);
    r.lower_slack = std::numeric_limits<double>::infinity();
    r.upper_slack = std::numeric_limits<double>::infinity();
    r.sandwich_slack = std::numeric_limits<double>::infinity();
    const std::uint64_t count = std::uint64_t{1} << g.num_edges();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        std::fill(l1.begin(), l1.end(), 0.0);
        std::fill(l2.begin(), l2.end(), 0.0);
        std::fill(size.begin(), size.end(), 0);
        for (int l = 0; l < g.num_edges(); ++l) {
            const auto& e = g.edges()[l];
            const int own = ((mask >> l) & 1U) ? e.hi : e.lo;
            const double v = r.projected(l);
            l1[own] += std::abs(v);
            l2[own] += v * v;
            ++size[own];
        }
        double value_sq = 0.0;
        double partition = 0.0;
        for (int i = 0; i < n; ++i) {
            const double l1_sq = l1[i] * l1[i];
            value_sq += l1_sq;
            partition += l2[i];
            r.sandwich_slack = std::min({r.sandwich_slack, l1_sq - l2[i] + tol, size[i] * l2[i] - l1_sq + tol});
        }
        const double lower = norm_sq - value_sq / n_max + tol;
        const double upper = value_sq - norm_sq + tol;
        r.partition_error = std::max(r.partition_error, std::abs(partition - norm_sq));
        if (std::min(lower, upper) < std::min(r.lower_slack, r.upper_slack)) r.witness_mask = mask;
        r.lower_slack = std::min(r.lower_slack, lower);
        r.upper_slack = std::min(r.upper_slack, upper);
    }
    r.assignments = count;
    r.ok = r.lower_slack >= 0.0 && r.upper_slack >= 0.0 && r.sandwich_slack >= 0.0 &&
           r.partition_error <= 1e-12 * (1.0 + norm_sq);
    return r;
}

namespace {

double level_objective(const Graph& g, const Vector& w, const Vector& s)
{
    double total = 0.0;
    for (int l = 0; l < g.num_edges(); ++l) {
        const auto& e = g.edges()[l];
        total += w(l) * std::min(s(e.lo), s(e.hi));
    }
    return total;
}

void project_levels(Vector& s)
{
    s = s.cwiseMax(0.0);
    const double norm = s.norm();
    if (norm > 1.0) s /= norm;
}

Vector fractional_loads(const Graph& g, const Vector& w, const Vector& beta)
{
    Vector c = Vector::Zero(g.num_nodes());
    for (int l = 0; l < g.num_edges(); ++l) {
        const auto& e = g.edges()[l];
        c(e.lo) += w(l) * beta(l);
        c(e.hi) += w(l) * (1.0 - beta(l));
    }
    return c;
}

} // namespace

SmDualEstimate sm_dual_norm(const Graph& g, const VectorCRef& z, const SmDualOptions& opts, std::uint64_t seed)
{
    if (z.size() != g.num_edges()) throw Error(ErrorKind::DimensionMismatch, "z vs graph");
    const int n = g.num_nodes();
    const Vector w = z.cwiseAbs();
    SmDualEstimate best{0.0, 0.0, Vector::Zero(g.num_edges())};
    if (w.maxCoeff() == 0.0) return best;

    Vector best_levels = Vector::Zero(n);
    double best_value = 0.0;
    auto consider = [&](const Vector& s) {
        const double v = level_objective(g, w, s);
        if (v > best_value) {
            best_value = v;
            best_levels = s;
        }
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vector grad(n);
    for (int start = 0; start < opts.starts; ++start) {
        Vector s(n);
        if (start == 0) s.setConstant(1.0);
        else for (auto& v : s) v = unit(rng);
        s /= s.norm();
        consider(s);
        for (int k = 0; k < opts.steps; ++k) {
            grad.setZero();
            for (int l = 0; l < g.num_edges(); ++l) {
                const auto& e = g.edges()[l];
                if (s(e.lo) < s(e.hi)) grad(e.lo) += w(l);
                else if (s(e.hi) < s(e.lo)) grad(e.hi) += w(l);
                else {
                    grad(e.lo) += 0.5 * w(l);
                    grad(e.hi) += 0.5 * w(l);
                }
            }
            const double gn = grad.norm();
            if (gn == 0.0) break;
            s += (opts.step / gn) * grad;
            project_levels(s);
            consider(s);
        }
    }

    // Accelerated projected gradient on the fractional assignment.
    const double lip = 4.0 * neighbor_sets(g).max_degree * w.maxCoeff() * w.maxCoeff();
    Vector beta = Vector::Constant(g.num_edges(), 0.5);
    Vector y = beta;
    double t = 1.0;
    double upper = fractional_loads(g, w, beta).norm();
    for (int k = 0; k < opts.dual_steps; ++k) {
        const Vector c = fractional_loads(g, w, y);
        Vector step_dir(g.num_edges());
        for (int l = 0; l < g.num_edges(); ++l) {
            const auto& e = g.edges()[l];
            step_dir(l) = 2.0 * w(l) * (c(e.lo) - c(e.hi));
        }
        const Vector next = (y - step_dir / lip).cwiseMax(0.0).cwiseMin(1.0);
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = next + ((t - 1.0) / t_next) * (next - beta);
        beta = next;
        t = t_next;
        if (k % 50 == 0 || k + 1 == opts.dual_steps) {
            const Vector loads = fractional_loads(g, w, beta);
            const double norm = loads.norm();
            upper = std::min(upper, norm);
            if (norm > 0.0) consider(loads / norm);
        }
    }

    Vector x(g.num_edges());
    for (int l = 0; l < g.num_edges(); ++l) {
        const auto& e = g.edges()[l];
        const double sgn = z(l) > 0.0 ? 1.0 : (z(l) < 0.0 ? -1.0 : 0.0);
        x(l) = sgn * std::min(best_levels(e.lo), best_levels(e.hi));
    }
    const double sm = norm_sm(neighbor_sets(g), x);
    if (sm > 1.0) x /= sm;
    best.witness = x;
    best.value = z.dot(x);
    best.upper_bound = upper;
    return best;
}

DualBoundReport dual_lower_bound_check(const Graph& g, int samples, std::uint64_t seed, const SmDualOptions& opts)
{
    require_enumerable(g, kMaxOracleEdges);
    DualBoundReport r;
    r.worst_slack = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int e = g.num_edges();
    for (int k = 0; k < e + samples; ++k) {
        Vector z = Vector::Zero(e);
        if (k < e) z(k) = 1.0;
        else for (auto& v : z) v = normal(rng);
        const auto est = sm_dual_norm(g, z, opts, seed + static_cast<std::uint64_t>(k));
        const double vmin = smno_dual_candidate(g, z).min;
        const double rhs = 0.5 * vmin * vmin;
        const double slack = est.value * est.value - rhs + (1e-6 + 1e-3 * rhs);
        r.max_oracle_gap = std::max(r.max_oracle_gap, est.upper_bound - est.value);
        if (slack < r.worst_slack) {
            r.worst_slack = slack;
            r.witness = z;
        }
        if (slack < 0.0) ++r.flagged;
        ++r.samples;
    }
    return r;
}

double grad_in_range_check(const DualConsensusProblem& p, const DualState& s, const RangeProjector& proj)
{
    const Vector grad = p.full_gradient(s);
    const int d = p.block_dim();
    const int e = p.num_coordinates();
    double total = 0.0;
    for (int c = 0; c < d; ++c) {
        Vector slice(e);
        for (int l = 0; l < e; ++l) slice(l) = grad(l * d + c);
        total += (proj.p * slice - slice).squaredNorm();
    }
    return std::sqrt(total);
}

} // namespace setcd
