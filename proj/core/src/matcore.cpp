#include "wordeq/matcore.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace wordeq {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPositiveTol = 1e-12;
constexpr double kSingularCond = 1e14;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(Matrix m) {
  require_square(m, "HermitianMatrix");
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > kHermitianTol * scale) {
    throw std::invalid_argument(
        "HermitianMatrix: input is not Hermitian (defect " + std::to_string(defect) +
        " exceeds tolerance " + std::to_string(kHermitianTol * scale) + ")");
  }
  mat_ = 0.5 * (m + m.adjoint().eval());
}

HermitianMatrix HermitianMatrix::identity(Eigen::Index n) {
  return HermitianMatrix(Matrix::Identity(n, n));
}

PDMatrix::PDMatrix(HermitianMatrix h) : base_(std::move(h)) {
  eig_ = eig_hermitian(base_);
  min_eigenvalue_ = eig_.eigenvalues(0);
  max_eigenvalue_ = eig_.eigenvalues(eig_.eigenvalues.size() - 1);
  const double norm = std::max(std::abs(min_eigenvalue_), std::abs(max_eigenvalue_));
  if (!(min_eigenvalue_ > kPositiveTol * norm)) {
    throw std::invalid_argument(
        "PDMatrix: matrix is not positive definite (min eigenvalue " +
        std::to_string(min_eigenvalue_) + ")");
  }
}

PDMatrix PDMatrix::identity(Eigen::Index n) {
  return PDMatrix(HermitianMatrix::identity(n));
}

PDMatrix PDMatrix::inverse() const { return matrix_power(*this, -1.0); }

SpectralDecomposition eig_hermitian(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_hermitian: eigensolver did not converge");
  }
  return SpectralDecomposition{solver.eigenvectors(), solver.eigenvalues()};
}

Matrix power_from_decomposition(const SpectralDecomposition& eig, double p) {
  const Eigen::Index n = eig.eigenvalues.size();
  Eigen::VectorXd powered(n);
  const bool integral_nonneg = p >= 0.0 && p == std::floor(p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda <= 0.0 && !integral_nonneg) {
      throw NumericalError(
          "power_from_decomposition: non-positive eigenvalue under fractional or "
          "negative exponent");
    }
    powered(i) = std::pow(lambda, p);
  }
  Matrix result = eig.unitary * powered.asDiagonal() * eig.unitary.adjoint();
  return 0.5 * (result + result.adjoint().eval());
}

PDMatrix matrix_power(const PDMatrix& a, double p) {
  return PDMatrix(HermitianMatrix(power_from_decomposition(a.decomposition(), p)));
}

double spectral_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double spectral_norm(const HermitianMatrix& h) {
  SpectralDecomposition eig = eig_hermitian(h);
  const Eigen::Index n = eig.eigenvalues.size();
  return std::max(std::abs(eig.eigenvalues(0)), std::abs(eig.eigenvalues(n - 1)));
}

double spectral_norm(const PDMatrix& a) { return a.max_eigenvalue(); }

PDMatrix geometric_mean(const PDMatrix& c, const PDMatrix& d) {
  if (c.dim() != d.dim()) {
    throw std::invalid_argument("geometric_mean: dimension mismatch");
  }
  const Matrix c_half = power_from_decomposition(c.decomposition(), 0.5);
  const Matrix c_negh = power_from_decomposition(c.decomposition(), -0.5);
  const PDMatrix inner(Matrix(c_negh * d.matrix() * c_negh));
  const Matrix inner_half = power_from_decomposition(inner.decomposition(), 0.5);
  return PDMatrix(Matrix(c_half * inner_half * c_half));
}

HermitianMatrix congruence(const HermitianMatrix& x, const Matrix& z) {
  require_square(z, "congruence");
  if (z.rows() != x.dim()) {
    throw std::invalid_argument("congruence: dimension mismatch");
  }
  if (condition_estimate(z) > kSingularCond) {
    throw NumericalError("congruence: transform matrix is singular to working precision");
  }
  return HermitianMatrix(Matrix(z.adjoint() * x.matrix() * z));
}

double condition_estimate(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sigma = svd.singularValues();
  const double smin = sigma(sigma.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sigma(0) / smin;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over a stream-offset state.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

// Deterministic normal sampler.  std::normal_distribution is
// implementation-defined, so Box-Muller is rolled by hand to keep byte-level
// reproducibility across standard libraries.
class NormalSampler {
public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    // 53-bit mantissa in (0, 1]; avoid exactly 0 for the logarithm.
    const double u = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    return u;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = two_pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Complex complex_normal() {
    constexpr double inv_sqrt2 = 0.70710678118654752440084436210485;
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * inv_sqrt2;
  }

private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

Eigen::VectorXd logspaced_eigenvalues(Eigen::Index n, double cond_target) {
  Eigen::VectorXd lambda(n);
  if (n == 1) {
    lambda(0) = 1.0;
    return lambda;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    lambda(i) = std::pow(cond_target, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return lambda;
}

void check_random_pd_args(Eigen::Index n, double cond_target) {
  if (n < 1) throw std::invalid_argument("random_pd: dimension must be at least 1");
  if (!(cond_target >= 1.0)) {
    throw std::invalid_argument("random_pd: condition target must be at least 1");
  }
}

}  // namespace

PDMatrix random_pd(Eigen::Index n, std::uint64_t seed, double cond_target) {
  check_random_pd_args(n, cond_target);
  NormalSampler rng(derive_seed(seed, 0x67696E69ULL));
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  }
  // QR with phase-fixed R diagonal yields a Haar-distributed unitary.
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0) ? d / mag : Complex(1.0, 0.0);
  }
  const Eigen::VectorXd lambda = logspaced_eigenvalues(n, cond_target);
  return PDMatrix(Matrix(q * lambda.asDiagonal() * q.adjoint()));
}

PDMatrix random_pd_real(Eigen::Index n, std::uint64_t seed, double cond_target) {
  check_random_pd_args(n, cond_target);
  NormalSampler rng(derive_seed(seed, 0x7265616CULL));
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  const Eigen::VectorXd lambda = logspaced_eigenvalues(n, cond_target);
  const Eigen::MatrixXd a = q * lambda.asDiagonal() * q.transpose();
  return PDMatrix(Matrix(a.cast<Complex>()));
}

}  // namespace wordeq
