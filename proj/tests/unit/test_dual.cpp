#include <doctest.h>

#include <oracles.hpp>
#include <setcd/dual.hpp>
#include <setcd/error.hpp>

using namespace setcd;

namespace {

// f_i = 1/2 (theta - a_i)^2
DualConsensusProblem two_node(double a0, double a1)
{
    std::vector<Quadratic> fs;
    for (double a : {a0, a1}) {
        Vector b(1);
        b << -a;
        fs.emplace_back(Matrix::Identity(1, 1), b, 0.5 * a * a);
    }
    return DualConsensusProblem(Graph::build(2, {{0, 1}}), std::move(fs));
}

// lambda with A lambda = Q_i theta* + b_i, i.e. the dual optimum (min-norm)
Vector optimal_lambda(const DualConsensusProblem& p)
{
    const int d = p.block_dim();
    const auto a = oracle::incidence(p.graph());
    Vector theta;
    oracle::primal_min(oracle::to_quads(p.functions()), &theta);
    Vector lambda(p.num_coordinates() * d);
    for (int c = 0; c < d; ++c) {
        Vector z(p.num_nodes());
        for (int i = 0; i < p.num_nodes(); ++i) {
            z(i) = (p.functions()[i].q() * theta + p.functions()[i].b())(c);
        }
        const Vector lam_c = a.completeOrthogonalDecomposition().solve(z);
        for (int l = 0; l < p.num_coordinates(); ++l) lambda(l * d + c) = lam_c(l);
    }
    return lambda;
}

} // namespace

TEST_CASE("two-node problem in closed form")
{
    const auto p = two_node(1.0, 3.0);
    CHECK(p.smoothness() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(p.sigma_a() == doctest::Approx(2.0).epsilon(1e-14));
    // F(lambda) = lambda^2 + (a0 - a1) lambda, minimum -(a0 - a1)^2 / 4
    CHECK(p.optimal_value() == doctest::Approx(-1.0));
    CHECK(p.primal_minimum() == doctest::Approx(1.0));
    for (double lam : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
        Vector v(1);
        v << lam;
        const auto s = p.state_from(v);
        CHECK(p.value(s) == doctest::Approx(lam * lam - 2.0 * lam));
        CHECK(p.coordinate_gradient(s, 0)(0) == doctest::Approx(2.0 * lam - 2.0));
    }
    Vector v(1);
    v << 2.0; // lambda* + 1
    CHECK(p.suboptimality(p.state_from(v)) == doctest::Approx(1.0).epsilon(1e-14));
    v << 1.0;
    CHECK(std::abs(p.suboptimality(p.state_from(v))) <= 1e-15);
}

TEST_CASE("dual value, gradient and optimum agree with the dense oracle")
{
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + trial % 6;
        const int d = trial % 2 == 0 ? 1 : 3;
        const auto g = random_connected_graph(n, trial % 3, rng);
        const auto p = DualConsensusProblem(g, oracle::random_quadratics(rng, n, d));
        const auto ref = oracle::to_quads(p.functions());
        const auto s = p.gaussian_state(trial);

        CHECK(oracle::rel_err(p.value(s), oracle::dual_value(g, ref, s.lambda)) < 1e-11);
        CHECK(oracle::rel_err(p.optimal_value(), -oracle::primal_min(ref)) < 1e-11);

        const Vector fd = oracle::fd_gradient(g, ref, s.lambda);
        const Vector grad = p.full_gradient(s);
        CHECK((grad - fd).norm() <= 1e-6 * std::max(1.0, fd.norm()));
        for (int l = 0; l < p.num_coordinates(); ++l) {
            CHECK((p.coordinate_gradient(s, l) - grad.segment(l * d, d)).norm() == 0.0);
        }

        const auto opt = p.state_from(optimal_lambda(p));
        CHECK(std::abs(p.suboptimality(opt)) < 1e-9 * std::max(1.0, std::abs(p.optimal_value())));
        CHECK(p.full_gradient(opt).norm() < 1e-8);
        CHECK(std::abs(p.duality_gap(opt)) < 1e-8);
        const auto thetas = p.primal_recovery(opt);
        for (const auto& t : thetas) CHECK((t - p.primal_optimum()).norm() < 1e-8);
    }
}

TEST_CASE("apply_update keeps aggregates consistent and reports the value change")
{
    std::mt19937_64 rng(3);
    const auto g = random_connected_graph(6, 4, rng);
    const auto p = DualConsensusProblem(g, oracle::random_quadratics(rng, 6, 2));
    auto s = p.gaussian_state(9);
    for (int k = 0; k < 200; ++k) {
        const int l = k % p.num_coordinates();
        const double before = p.value(s);
        const Vector grad = p.coordinate_gradient(s, l);
        const Vector lam = s.lambda.segment(l * 2, 2);
        const double delta = p.apply_update(s, l, 1.0 / p.smoothness());
        CHECK(delta == doctest::Approx(p.value(s) - before).epsilon(1e-9).scale(1.0));
        CHECK((s.lambda.segment(l * 2, 2) - (lam - grad / p.smoothness())).norm() < 1e-14);
        CHECK(delta <= -grad.squaredNorm() / (2 * p.smoothness()) + 1e-10);
    }
    CHECK(p.aggregate_drift(s) < 1e-12);
    CHECK_THROWS_AS(p.apply_update(s, 0, 0.0), Error);
    CHECK_THROWS_AS(p.coordinate_gradient(s, p.num_coordinates()), Error);
}

TEST_CASE("smoothness certificate along coordinate directions")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 8; ++trial) {
        const auto g = random_connected_graph(5, trial % 4, rng);
        const int d = 1 + trial % 2;
        const auto p = DualConsensusProblem(g, oracle::random_quadratics(rng, 5, d));
        const auto s = p.gaussian_state(trial);
        const double f0 = p.value(s);
        for (int l = 0; l < p.num_coordinates(); ++l) {
            for (int c = 0; c < d; ++c) {
                const double gl = p.coordinate_gradient(s, l)(c);
                for (double t : {-1.0, -1e-2, 1e-2, 1.0}) {
                    Vector lam = s.lambda;
                    lam(l * d + c) += t;
                    const double f1 = p.value(p.state_from(lam));
                    CHECK(f1 <= f0 + t * gl + 0.5 * p.smoothness() * t * t + 1e-10 * (1 + std::abs(f0)));
                }
            }
        }
    }
}

TEST_CASE("constants L = gamma_max / mu_min and sigma_A = gamma_min+ / M_max")
{
    const auto g = Graph::build(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    std::vector<Quadratic> fs;
    for (double c : {1.0, 2.0, 3.0, 4.0}) fs.push_back(Quadratic::scaled_identity(2, c));
    const DualConsensusProblem p(g, fs);
    CHECK(p.smoothness() == doctest::Approx(4.0 / 2.0));
    CHECK(p.sigma_a() == doctest::Approx(2.0 / 8.0));
    CHECK(p.mu_min() == doctest::Approx(2.0));
    CHECK(p.m_max() == doctest::Approx(8.0));
}

TEST_CASE("cycle null vector")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_connected_graph(3 + trial % 4, 1 + trial % 3, rng);
        const Vector w = cycle_null_vector(g);
        REQUIRE(w.size() == g.num_edges());
        CHECK(w.norm() > 0.5);
        CHECK((oracle::incidence(g) * w).norm() == 0.0);
        const auto p = DualConsensusProblem(g, oracle::random_quadratics(rng, g.num_nodes(), 1));
        const auto s = p.gaussian_state(trial);
        CHECK(std::abs(p.value(p.state_from(s.lambda + w)) - p.value(s)) <= 1e-9 * std::max(1.0, std::abs(p.value(s))));
    }
    CHECK(cycle_null_vector(Graph::build(4, {{0, 1}, {0, 2}, {0, 3}})).size() == 0);
}

TEST_CASE("dual problem validation")
{
    const auto g = Graph::build(3, {{0, 1}, {1, 2}});
    CHECK_THROWS_AS(DualConsensusProblem(g, {Quadratic::scaled_identity(1, 1.0)}), Error);
    CHECK_THROWS_AS(DualConsensusProblem(g, {Quadratic::scaled_identity(1, 1.0), Quadratic::scaled_identity(2, 1.0),
                                             Quadratic::scaled_identity(1, 1.0)}),
                    Error);
    const DualConsensusProblem p(g, std::vector<Quadratic>(3, Quadratic::scaled_identity(2, 1.0)));
    CHECK_THROWS_AS(p.state_from(Vector::Zero(3)), Error);
    CHECK(p.gaussian_state(4).lambda == p.gaussian_state(4).lambda);
    CHECK(p.gaussian_state(4).lambda != p.gaussian_state(5).lambda);
}

TEST_CASE("separable quadratic problem")
{
    const auto carrier = circulant_regular(24, 4);
    const auto p = separable_problem(carrier, 10.0, 3.0, 42);
    CHECK(p.num_coordinates() == 48);
    CHECK((p.diag().array() > 0.0).all());
    CHECK(separable_problem(carrier, 10.0, 3.0, 42).diag() == p.diag());
    CHECK(p.smoothness() == doctest::Approx(2.0 * p.diag().maxCoeff()));
    CHECK(p.strong_convexity() == doctest::Approx(2.0 * p.diag().minCoeff()));

    const auto flat = separable_problem(carrier, 10.0, 0.0, 1);
    CHECK((flat.diag().array() == 10.0).all());
    CHECK(flat.smoothness() == 20.0);

    const auto s = far_near_state(p, perfect_matching_circulant(carrier));
    CHECK((s.x.array() == 100.0).count() == 12);
    CHECK((s.x.array() == 1.0).count() == 36);
    // central differences are exact on quadratics, so a wide step only limits round-off
    const double h = 1e-2;
    for (int l = 0; l < 48; ++l) {
        auto up = s;
        auto dn = s;
        up.x(l) += h;
        dn.x(l) -= h;
        const double fd = (p.value(up) - p.value(dn)) / (2 * h);
        CHECK(oracle::rel_err(p.coordinate_gradient(s, l)(0), fd) < 1e-6);
    }
    auto t = s;
    const double before = p.value(t);
    const double delta = p.apply_update(t, 5, 1.0 / p.smoothness());
    CHECK(delta == doctest::Approx(p.value(t) - before));
    CHECK_THROWS_AS(separable_problem(carrier, -1.0, 1.0, 0), Error);
}
