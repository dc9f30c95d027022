#include "wordeq/genword.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace wordeq {

GenSymWord::GenSymWord(std::vector<Rational> a_exponents, int coeff_count)
    : a_exponents_(std::move(a_exponents)), coeff_count_(coeff_count) {
  const int h = static_cast<int>(a_exponents_.size());
  if (h < 1) {
    throw std::invalid_argument("GenSymWord: at least one A-exponent is required");
  }
  if (coeff_count_ != h && coeff_count_ != h - 1) {
    throw std::invalid_argument(
        "GenSymWord: coefficient count must equal the A-exponent count (center "
        "fold) or be one less (central A-power)");
  }
  for (const Rational& e : a_exponents_) {
    if (!e.is_positive()) {
      throw std::invalid_argument("GenSymWord: A-exponents must be positive");
    }
  }
}

GenSymWord parse_gen_half(std::string_view text) {
  std::vector<Rational> exponents;
  int coeffs = 0;
  std::istringstream stream{std::string(text)};
  std::string token;
  bool expect_a = true;
  while (stream >> token) {
    if (token[0] == 'A') {
      if (!expect_a) {
        throw ParseError("expected coefficient C" + std::to_string(coeffs + 1) +
                             " or end of half",
                         0);
      }
      // Reuse the word grammar for the exponent by parsing the token as a
      // one-factor word.
      const WordExpr w = parse_word(token);
      if (w.size() != 1 || w.factors()[0].letter != Letter::A) {
        throw ParseError("malformed A-power token '" + token + "'", 0);
      }
      const Rational e = w.factors()[0].exponent;
      if (!e.is_positive()) {
        throw ParseError("A-exponents in a half must be positive", 0);
      }
      exponents.push_back(e);
      expect_a = false;
    } else if (token[0] == 'C') {
      if (expect_a) {
        throw ParseError("expected an A-power before '" + token + "'", 0);
      }
      std::size_t idx = 0;
      for (std::size_t i = 1; i < token.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
          throw ParseError("malformed coefficient token '" + token + "'", 0);
        }
        idx = idx * 10 + static_cast<std::size_t>(token[i] - '0');
      }
      if (token.size() == 1 || idx != static_cast<std::size_t>(coeffs + 1)) {
        throw ParseError("coefficients must be numbered consecutively from C1; got '" +
                             token + "'",
                         0);
      }
      ++coeffs;
      expect_a = true;
    } else {
      throw ParseError("unexpected token '" + token + "' in half description", 0);
    }
  }
  if (exponents.empty()) {
    throw ParseError("half description must contain at least one A-power", 0);
  }
  return GenSymWord(std::move(exponents), coeffs);
}

std::string print_gen_half(const GenSymWord& w) {
  std::string out;
  const auto& exps = w.a_exponents();
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (i > 0) out += ' ';
    out += print_word(WordExpr({Factor{Letter::A, exps[i]}}));
    if (static_cast<int>(i) < w.coeff_count()) {
      out += " C" + std::to_string(i + 1);
    }
  }
  return out;
}

namespace {

double rotated_min_eigenvalue(const Matrix& c, double theta) {
  const Complex phase(std::cos(theta), std::sin(theta));
  const Matrix h = 0.5 * (phase * c + (phase * c).adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("is_completely_invertible: eigensolver did not converge");
  }
  return solver.eigenvalues()(0);
}

// Golden-section maximization of f on [lo, hi] down to interval width tol.
double golden_max(const Matrix& c, double lo, double hi, double tol, double& best_f) {
  constexpr double inv_phi = 0.6180339887498948482;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = rotated_min_eigenvalue(c, x1);
  double f2 = rotated_min_eigenvalue(c, x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = rotated_min_eigenvalue(c, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = rotated_min_eigenvalue(c, x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  best_f = rotated_min_eigenvalue(c, mid);
  return mid;
}

}  // namespace

FovCertificate is_completely_invertible(const Matrix& c) {
  if (c.rows() != c.cols() || c.rows() == 0) {
    throw std::invalid_argument("is_completely_invertible: matrix must be square");
  }
  constexpr int kGrid = 720;
  constexpr double two_pi = 6.283185307179586476925286766559;
  std::vector<double> values(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    values[static_cast<std::size_t>(i)] =
        rotated_min_eigenvalue(c, two_pi * i / kGrid);
  }

  FovCertificate cert;
  cert.grid_points = kGrid;
  double best = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  // Refine every grid-local maximum; the margin function can have several
  // humps, and the grid density is the safeguard that each one is bracketed.
  for (int i = 0; i < kGrid; ++i) {
    const double prev = values[static_cast<std::size_t>((i + kGrid - 1) % kGrid)];
    const double next = values[static_cast<std::size_t>((i + 1) % kGrid)];
    const double here = values[static_cast<std::size_t>(i)];
    if (here < prev || here < next) continue;
    const double lo = two_pi * (i - 1) / kGrid;
    const double hi = two_pi * (i + 1) / kGrid;
    double f = 0.0;
    double theta = golden_max(c, lo, hi, 1e-12, f);
    if (f > best) {
      best = f;
      best_theta = theta;
    }
  }
  cert.margin = best;
  cert.theta_star = std::fmod(best_theta + two_pi, two_pi);
  cert.contains_zero = !(best > 0.0);
  return cert;
}

namespace {

void check_coeffs(const GenSymWord& w, const PDMatrix& a, const std::vector<Matrix>& coeffs) {
  if (static_cast<int>(coeffs.size()) != w.coeff_count()) {
    throw std::invalid_argument("genword: expected " + std::to_string(w.coeff_count()) +
                                " coefficients, got " + std::to_string(coeffs.size()));
  }
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const Matrix& c = coeffs[i];
    if (c.rows() != c.cols() || c.rows() != a.dim()) {
      throw std::invalid_argument("genword: coefficient C" + std::to_string(i + 1) +
                                  " has mismatched dimensions");
    }
    if (condition_estimate(c) > 1e14) {
      throw NumericalError("genword: coefficient C" + std::to_string(i + 1) +
                           " is singular to working precision");
    }
  }
}

Matrix half_value(const GenSymWord& w, const PDMatrix& a, const std::vector<Matrix>& coeffs) {
  Matrix l = Matrix::Identity(a.dim(), a.dim());
  const auto& exps = w.a_exponents();
  for (std::size_t i = 0; i < exps.size(); ++i) {
    l = l * power_from_decomposition(a.decomposition(), exps[i].to_double());
    if (static_cast<int>(i) < w.coeff_count()) l = l * coeffs[i];
  }
  return l;
}

}  // namespace

PDMatrix evaluate_genword(const GenSymWord& w, const PDMatrix& a,
                          const std::vector<Matrix>& coeffs) {
  check_coeffs(w, a, coeffs);
  const Matrix h = half_value(w, a, coeffs);
  return PDMatrix(Matrix(h * h.adjoint()));
}

GenSolveReport solve_genword(const GenSymWord& w, const std::vector<Matrix>& coeffs,
                             const PDMatrix& p, const SolveOptions& opts) {
  check_coeffs(w, PDMatrix::identity(p.dim()), coeffs);

  GenSolveReport result;
  result.certificates.reserve(coeffs.size());
  for (const Matrix& c : coeffs) {
    result.certificates.push_back(is_completely_invertible(c));
  }

  // Rescale A = X^L so every exponent in the expanded word is an integer.
  std::int64_t lcm = 1;
  for (const Rational& e : w.a_exponents()) lcm = std::lcm(lcm, e.denominator());

  std::vector<ProductFactor> product;
  const auto& exps = w.a_exponents();
  const int m = w.coeff_count();
  auto scaled_power = [&](std::size_t i) {
    return static_cast<int>((exps[i] * Rational(lcm)).numerator());
  };
  for (std::size_t i = 0; i < exps.size(); ++i) {
    ProductFactor pf;
    pf.a_power = scaled_power(i);
    product.push_back(std::move(pf));
    if (static_cast<int>(i) < m) {
      ProductFactor cf;
      cf.coefficient = coeffs[i];
      product.push_back(std::move(cf));
    }
  }
  // Mirror half: the center merges either into C_m C_m* or A^{2 e_h}.
  if (!w.center_is_fold()) {
    product.back().a_power *= 2;
  }
  const std::size_t mirror_from = w.center_is_fold() ? product.size() : product.size() - 1;
  for (std::size_t i = mirror_from; i-- > 0;) {
    if (product[i].a_power > 0) {
      ProductFactor pf;
      pf.a_power = product[i].a_power;
      product.push_back(std::move(pf));
    } else {
      ProductFactor cf;
      cf.coefficient = product[i].coefficient.adjoint();
      product.push_back(std::move(cf));
    }
  }

  double s_a_total = 0.0;
  double coeff_norms = 1.0;
  for (const ProductFactor& pf : product) {
    if (pf.a_power > 0) {
      s_a_total += pf.a_power;
    } else {
      coeff_norms *= spectral_norm(pf.coefficient);
    }
  }
  const double scalar_start =
      std::pow(spectral_norm(p) / coeff_norms, 1.0 / s_a_total) * opts.start_scale;

  // Solve a shade tighter than requested so the residual still meets
  // opts.tol after the X^L map-back and the re-evaluation as H H*.
  SolveOptions inner = opts;
  inner.tol = opts.tol * 0.1;
  SolveReport report = newton_solve_product(product, p, inner, scalar_start);
  if (lcm != 1) {
    report.trail.steps.push_back(
        ReductionStep{ReductionStep::Kind::RescaleA, Rational(lcm)});
    if (report.solution) {
      report.solution = matrix_power(*report.solution, static_cast<double>(lcm));
    }
  }
  if (report.solution) {
    const PDMatrix value = evaluate_genword(w, *report.solution, coeffs);
    report.relative_residual = (value.matrix() - p.matrix()).norm() / p.matrix().norm();
    report.converged = report.relative_residual <= opts.tol;
  }
  result.report = std::move(report);
  return result;
}

}  // namespace wordeq
