#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>

namespace setcd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorCRef = Eigen::Ref<const Eigen::VectorXd>;

/// f(x) = 1/2 x^T Q x + b^T x + c0 with Q symmetric positive definite.
///
/// The conjugate is f*(y) = 1/2 (y - b)^T Q^{-1} (y - b) - c0 and its
/// gradient Q^{-1} (y - b) is the maximizer of y^T x - f(x).
class Quadratic
{
public:
    Quadratic(Matrix q, Vector b, double c0 = 0.0);

    /// c ||x||^2, i.e. Q = 2c I, b = 0.
    static Quadratic scaled_identity(int dim, double c);

    int dim() const noexcept { return static_cast<int>(b_.size()); }
    const Matrix& q() const noexcept { return q_; }
    const Vector& b() const noexcept { return b_; }
    double c0() const noexcept { return c0_; }

    /// Strong convexity constant, lambda_min(Q).
    double mu() const noexcept { return mu_; }
    /// Smoothness constant, lambda_max(Q).
    double smoothness() const noexcept { return smoothness_; }

    double value(const VectorCRef& x) const;
    Vector gradient(const VectorCRef& x) const;
    Vector conjugate_gradient(const VectorCRef& y) const;
    double conjugate_value(const VectorCRef& y) const;

    /// Allocation-free conjugate gradient for the simulation loop.
    void conjugate_gradient_into(const VectorCRef& y, Eigen::Ref<Vector> out) const;

    Vector minimizer() const;

private:
    void check_dim(Eigen::Index n) const;

    Matrix q_;
    Vector b_;
    double c0_;
    Matrix q_inv_;
    double mu_ = 0.0;
    double smoothness_ = 0.0;
};

} // namespace setcd
