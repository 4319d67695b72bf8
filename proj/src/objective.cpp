#include <setcd/objective.hpp>

#include <string>

#include <Eigen/Eigenvalues>

#include <setcd/error.hpp>

namespace setcd {

Quadratic::Quadratic(Matrix q, Vector b, double c0)
    : q_(std::move(q))
    , b_(std::move(b))
    , c0_(c0)
{
    if (q_.rows() != q_.cols() || q_.rows() != b_.size() || b_.size() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "Q is " + std::to_string(q_.rows()) + "x" +
                                                      std::to_string(q_.cols()) + ", b has " +
                                                      std::to_string(b_.size()));
    }
    const double scale = q_.norm();
    if ((q_ - q_.transpose()).norm() > 1e-12 * scale) {
        throw Error(ErrorKind::NotPositiveDefinite, "Q is not symmetric");
    }
    Eigen::LLT<Matrix> llt(q_);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::NotPositiveDefinite, "Cholesky failed");
    q_inv_ = llt.solve(Matrix::Identity(dim(), dim()));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(q_, Eigen::EigenvaluesOnly);
    mu_ = eig.eigenvalues().minCoeff();
    smoothness_ = eig.eigenvalues().maxCoeff();
    if (!(mu_ > 0.0)) throw Error(ErrorKind::NotPositiveDefinite, "lambda_min(Q) = " + std::to_string(mu_));
}

Quadratic Quadratic::scaled_identity(int dim, double c)
{
    return Quadratic(2.0 * c * Matrix::Identity(dim, dim), Vector::Zero(dim), 0.0);
}

void Quadratic::check_dim(Eigen::Index n) const
{
    if (n != dim()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "expected " + std::to_string(dim()) + ", got " + std::to_string(n));
    }
}

double Quadratic::value(const VectorCRef& x) const
{
    check_dim(x.size());
    return 0.5 * x.dot(q_ * x) + b_.dot(x) + c0_;
}

Vector Quadratic::gradient(const VectorCRef& x) const
{
    check_dim(x.size());
    return q_ * x + b_;
}

Vector Quadratic::conjugate_gradient(const VectorCRef& y) const
{
    Vector out(dim());
    conjugate_gradient_into(y, out);
    return out;
}

void Quadratic::conjugate_gradient_into(const VectorCRef& y, Eigen::Ref<Vector> out) const
{
    check_dim(y.size());
    out.noalias() = q_inv_ * (y - b_);
}

double Quadratic::conjugate_value(const VectorCRef& y) const
{
    check_dim(y.size());
    const Vector r = y - b_;
    return 0.5 * r.dot(q_inv_ * r) - c0_;
}

Vector Quadratic::minimizer() const
{
    return -q_inv_ * b_;
}

} // namespace setcd
