#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "clockfcs/errors.hpp"

namespace clockfcs {

// Dense complex matrices, column-major (Eigen's default layout).
// Vectorization throughout the project is column-stacking: vectorize(A)
// lists the columns of A top to bottom, so that
//   vectorize(B X C) = kron(C^T, B) * vectorize(X).
using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Throws ValidationError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& a, const std::string& what);

Matrix kron(const Matrix& a, const Matrix& b);

Vector vectorize(const Matrix& a);    // square input
Matrix unvectorize(const Vector& v);  // length must be a perfect square

// SVD pseudo-inverse. Singular values <= cutoff * sigma_max are zeroed;
// the remaining ones are inverted.
Matrix moore_penrose(const Matrix& a, double cutoff = 1e-12);

// Orthonormal basis of the right null space of a square matrix, returned
// as matrix columns (zero columns for a full-rank input).
Matrix null_space(const Matrix& a, double cutoff = 1e-12);

// Number of singular values <= cutoff * sigma_max.
Eigen::Index kernel_dimension(const Matrix& a, double cutoff = 1e-12);

// exp(a t) applied through the eigenbasis of `a`. Construction verifies the
// decomposition by reconstruction and throws NumericalError when `a` is too
// close to defective for the factorization to be trusted.
class EigenPropagator {
 public:
  explicit EigenPropagator(const Matrix& a, double tol = 1e-8);

  Vector apply(const Vector& v, double t) const;  // exp(a t) v

  // Split form for repeated evaluations from a fixed start vector:
  // apply(v, t) == unmix_at(mix(v), t).
  Vector mix(const Vector& v) const;
  Vector unmix_at(const Vector& w, double t) const;

  const Vector& eigenvalues() const { return lambda_; }

 private:
  Matrix v_;
  Matrix vinv_;
  Vector lambda_;
};

}  // namespace clockfcs
