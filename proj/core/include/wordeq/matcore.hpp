#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

#include "wordeq/errors.hpp"

namespace wordeq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Eigendecomposition of a Hermitian matrix: H = U diag(eigenvalues) U*.
/// Eigenvalues are real and sorted ascending; U has orthonormal columns.
struct SpectralDecomposition {
  Matrix unitary;
  Eigen::VectorXd eigenvalues;
};

/// A square complex matrix validated (and then exactly symmetrized) to be
/// Hermitian.  Rejects inputs whose Hermitian defect exceeds
/// 1e-12 * (1 + max |entry|).
class HermitianMatrix {
public:
  explicit HermitianMatrix(Matrix m);

  static HermitianMatrix identity(Eigen::Index n);

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

private:
  Matrix mat_;
};

/// A Hermitian matrix validated to be positive definite.  Construction runs
/// one eigendecomposition, which is cached; positivity requires
/// lambda_min > 1e-12 * ||H||.
class PDMatrix {
public:
  explicit PDMatrix(HermitianMatrix h);
  explicit PDMatrix(Matrix m) : PDMatrix(HermitianMatrix(std::move(m))) {}

  static PDMatrix identity(Eigen::Index n);

  Eigen::Index dim() const { return base_.dim(); }
  const Matrix& matrix() const { return base_.matrix(); }
  const HermitianMatrix& hermitian() const { return base_; }
  const SpectralDecomposition& decomposition() const { return eig_; }
  double min_eigenvalue() const { return min_eigenvalue_; }
  double max_eigenvalue() const { return max_eigenvalue_; }

  PDMatrix inverse() const;

private:
  HermitianMatrix base_;
  SpectralDecomposition eig_;
  double min_eigenvalue_ = 0.0;
  double max_eigenvalue_ = 0.0;
};

/// Eigendecomposition of a Hermitian matrix (eigenvalues ascending).
SpectralDecomposition eig_hermitian(const HermitianMatrix& h);

/// Raw matrix built from a spectral decomposition with eigenvalues taken to
/// the power p: U diag(lambda^p) U*.  Requires positive eigenvalues whenever
/// p is not a non-negative integer.
Matrix power_from_decomposition(const SpectralDecomposition& eig, double p);

/// Primary power of a positive definite matrix for an arbitrary real
/// exponent.  matrix_power(a, -1) is the inverse, matrix_power(a, 1/2) the
/// unique positive definite square root, and so on.
PDMatrix matrix_power(const PDMatrix& a, double p);

/// Spectral norm (largest singular value).  For Hermitian arguments this is
/// max |lambda|.
double spectral_norm(const Matrix& m);
double spectral_norm(const HermitianMatrix& h);
double spectral_norm(const PDMatrix& a);

/// Geometric mean of two positive definite matrices:
///   C # D = C^{1/2} (C^{-1/2} D C^{-1/2})^{1/2} C^{1/2}.
/// It is the unique positive definite solution X of X C^{-1} X = D and is
/// symmetric in its arguments.
PDMatrix geometric_mean(const PDMatrix& c, const PDMatrix& d);

/// Congruence Z* X Z for invertible Z.  Preserves the inertia of X.  Throws
/// NumericalError when Z is singular to working precision
/// (condition estimate above 1e14).
HermitianMatrix congruence(const HermitianMatrix& x, const Matrix& z);

/// Condition number estimate (sigma_max / sigma_min) of a general matrix.
double condition_estimate(const Matrix& m);

/// Deterministic seed derivation for independent random streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded random positive definite matrix: Q diag(lambda) Q* with Q Haar
/// unitary (orthogonal in the real variant) and eigenvalues log-spaced so
/// the condition number equals cond_target (n >= 2; for n = 1 the result is
/// the scalar 1).  Identical (n, seed, cond_target) give identical output on
/// every platform.
PDMatrix random_pd(Eigen::Index n, std::uint64_t seed, double cond_target);
PDMatrix random_pd_real(Eigen::Index n, std::uint64_t seed, double cond_target);

}  // namespace wordeq
