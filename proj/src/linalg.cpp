#include "clockfcs/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace clockfcs {

namespace {

struct Svd {
  Matrix u;
  RealVector sigma;
  Matrix v;
};

// JacobiSVD is the accurate choice at the small sizes that dominate this
// project; BDCSVD takes over for large vectorized generators where Jacobi
// iteration becomes prohibitively slow.
Svd decompose(const Matrix& a) {
  Svd out;
  if (a.rows() < 128 && a.cols() < 128) {
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
    out.u = svd.matrixU();
    out.sigma = svd.singularValues();
    out.v = svd.matrixV();
  } else {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
    out.u = svd.matrixU();
    out.sigma = svd.singularValues();
    out.v = svd.matrixV();
  }
  return out;
}

void check_cutoff(double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0))
    throw ValidationError("SVD cutoff must lie in (0, 1), got " + std::to_string(cutoff));
}

}  // namespace

void require_finite(const Matrix& a, const std::string& what) {
  if (!a.allFinite())
    throw ValidationError(what + " contains NaN or infinite entries");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows * cols > (Eigen::Index{1} << 30))
    throw ValidationError("kron result dimensions overflow the dense-storage budget");
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector vectorize(const Matrix& a) {
  if (a.rows() != a.cols())
    throw ValidationError("vectorize expects a square matrix");
  return Eigen::Map<const Vector>(a.data(), a.size());
}

Matrix unvectorize(const Vector& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (n * n != v.size())
    throw ValidationError("unvectorize expects a perfect-square length");
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Matrix moore_penrose(const Matrix& a, double cutoff) {
  check_cutoff(cutoff);
  require_finite(a, "moore_penrose input");
  const Svd svd = decompose(a);
  const double smax = svd.sigma.size() ? svd.sigma(0) : 0.0;
  RealVector inv = RealVector::Zero(svd.sigma.size());
  for (Eigen::Index i = 0; i < svd.sigma.size(); ++i)
    if (svd.sigma(i) > cutoff * smax) inv(i) = 1.0 / svd.sigma(i);
  return svd.v * inv.asDiagonal() * svd.u.adjoint();
}

Matrix null_space(const Matrix& a, double cutoff) {
  check_cutoff(cutoff);
  if (a.rows() != a.cols())
    throw ValidationError("null_space expects a square matrix");
  require_finite(a, "null_space input");
  const Svd svd = decompose(a);
  const double smax = svd.sigma.size() ? svd.sigma(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < svd.sigma.size() && svd.sigma(rank) > cutoff * smax) ++rank;
  return svd.v.rightCols(svd.sigma.size() - rank);
}

Eigen::Index kernel_dimension(const Matrix& a, double cutoff) {
  return null_space(a, cutoff).cols();
}

EigenPropagator::EigenPropagator(const Matrix& a, double tol) {
  require_finite(a, "propagator generator");
  Eigen::ComplexEigenSolver<Matrix> es(a);
  if (es.info() != Eigen::Success)
    throw NumericalError("eigendecomposition of the propagator generator failed");
  v_ = es.eigenvectors();
  lambda_ = es.eigenvalues();
  Eigen::PartialPivLU<Matrix> lu(v_);
  vinv_ = lu.solve(Matrix::Identity(a.rows(), a.cols()));
  const double scale = std::max(1.0, a.norm());
  const double resid = (v_ * lambda_.asDiagonal() * vinv_ - a).norm();
  if (!(resid <= tol * scale))
    throw NumericalError(
        "propagator generator is too close to defective (reconstruction residual " +
        std::to_string(resid / scale) + ")");
}

Vector EigenPropagator::mix(const Vector& v) const { return vinv_ * v; }

Vector EigenPropagator::unmix_at(const Vector& w, double t) const {
  Vector scaled(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    scaled(i) = std::exp(lambda_(i) * t) * w(i);
  return v_ * scaled;
}

Vector EigenPropagator::apply(const Vector& v, double t) const {
  return unmix_at(mix(v), t);
}

}  // namespace clockfcs
