#include "wordeq/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wordeq {

const char* to_string(WordClassTag tag) {
  switch (tag) {
    case WordClassTag::Symmetric: return "Symmetric";
    case WordClassTag::TwoSymmetricProduct: return "TwoSymmetricProduct";
    case WordClassTag::Neither: return "Neither";
  }
  return "?";
}

namespace {

std::string expand_letters(const WordExpr& w) {
  std::int64_t total = 0;
  for (const Factor& f : w.factors()) {
    if (!f.exponent.is_integer() || !f.exponent.is_positive()) {
      throw std::invalid_argument(
          "classify_word: every exponent must be a positive integer");
    }
    total += f.exponent.numerator();
    if (total > 4096) {
      throw std::invalid_argument("classify_word: word too long to classify");
    }
  }
  std::string s;
  s.reserve(static_cast<std::size_t>(total));
  for (const Factor& f : w.factors()) {
    s.append(static_cast<std::size_t>(f.exponent.numerator()),
             static_cast<char>(f.letter));
  }
  return s;
}

bool is_palindrome(const std::string& s, std::size_t lo, std::size_t hi) {
  while (lo + 1 < hi) {
    if (s[lo] != s[hi - 1]) return false;
    ++lo;
    --hi;
  }
  return true;
}

WordExpr compress_letters(const std::string& s, std::size_t lo, std::size_t hi) {
  std::vector<Factor> fs;
  std::size_t i = lo;
  while (i < hi) {
    std::size_t j = i;
    while (j < hi && s[j] == s[i]) ++j;
    fs.push_back(Factor{s[i] == 'A' ? Letter::A : Letter::B,
                        Rational(static_cast<std::int64_t>(j - i))});
    i = j;
  }
  return normalize(std::move(fs));
}

}  // namespace

WordClass classify_word(const WordExpr& w) {
  const std::string s = expand_letters(w);
  WordClass result;

  std::vector<WordSplit> splits;
  for (std::size_t t = 1; t + 1 <= s.size(); ++t) {
    if (is_palindrome(s, 0, t) && is_palindrome(s, t, s.size())) {
      splits.push_back(WordSplit{compress_letters(s, 0, t), compress_letters(s, t, s.size())});
    }
  }
  result.splits = std::move(splits);

  if (is_palindrome(s, 0, s.size())) {
    result.tag = WordClassTag::Symmetric;
  } else if (!result.splits.empty()) {
    result.tag = WordClassTag::TwoSymmetricProduct;
  } else {
    result.tag = WordClassTag::Neither;
  }
  return result;
}

namespace {

// log-uniform draw from [lo, hi], deterministic in (seed, stream).
double log_uniform(std::uint64_t seed, std::uint64_t stream, double lo, double hi) {
  const std::uint64_t bits = derive_seed(seed, stream);
  const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return lo * std::pow(hi / lo, u);
}

}  // namespace

TraceSearchReport trace_search(const WordExpr& w, Eigen::Index n, std::int64_t trials,
                               std::uint64_t seed, double cond_min, double cond_max) {
  if (trials < 1) throw std::invalid_argument("trace_search: trials must be >= 1");
  if (!(cond_min >= 1.0) || !(cond_max >= cond_min)) {
    throw std::invalid_argument("trace_search: need 1 <= cond_min <= cond_max");
  }

  TraceSearchReport report;
  report.word = w;
  report.classification = classify_word(w).tag;  // also validates exponents
  report.trials = trials;
  report.dimension = n;
  report.seed = seed;
  report.min_trace = std::numeric_limits<double>::infinity();

  for (std::int64_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = static_cast<std::uint64_t>(t);
    const double cond_a = log_uniform(seed, 4 * ts + 0, cond_min, cond_max);
    const double cond_b = log_uniform(seed, 4 * ts + 1, cond_min, cond_max);
    const PDMatrix a = random_pd_real(n, derive_seed(seed, 4 * ts + 2), cond_a);
    const PDMatrix b = random_pd_real(n, derive_seed(seed, 4 * ts + 3), cond_b);
    const double trace = evaluate(w, a, b).trace().real();
    if (trace < report.min_trace) {
      report.min_trace = trace;
      report.witness_a = a;
      report.witness_b = b;
    }
  }
  return report;
}

namespace {

PDMatrix exp_hermitian(const HermitianMatrix& s) {
  const SpectralDecomposition eig = eig_hermitian(s);
  Eigen::VectorXd lam(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::exp(eig.eigenvalues(i));
  return PDMatrix(Matrix(eig.unitary * lam.asDiagonal() * eig.unitary.adjoint()));
}

// Real coordinates of a Hermitian matrix: diagonal, then re/im of the upper
// triangle.
Matrix hermitian_from_coords(const std::vector<double>& x, Eigen::Index n) {
  Matrix s = Matrix::Zero(n, n);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) s(i, i) = x[idx++];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double re = x[idx++];
      const double im = x[idx++];
      s(i, j) = Complex(re, im);
      s(j, i) = Complex(re, -im);
    }
  }
  return s;
}

std::vector<double> coords_from_hermitian(const Matrix& s) {
  const Eigen::Index n = s.rows();
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index i = 0; i < n; ++i) x.push_back(s(i, i).real());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      x.push_back(s(i, j).real());
      x.push_back(s(i, j).imag());
    }
  }
  return x;
}

}  // namespace

CounterexampleReport counterexample_demo(const PDMatrix& b, std::int64_t samples,
                                         std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("counterexample_demo: samples must be >= 1");
  const Eigen::Index n = b.dim();
  const Matrix identity = Matrix::Identity(n, n);
  if ((b.matrix() - identity).norm() <= 1e-6 * b.matrix().norm()) {
    throw std::invalid_argument(
        "counterexample_demo: B must differ from the identity (the equation is "
        "solvable for B = I)");
  }

  const WordExpr word = parse_word("A^(-1) B A^2 B A^(-1)");
  const double i_norm = identity.norm();
  auto residual = [&](const PDMatrix& a) {
    return (evaluate(word, a, b) - identity).norm() / i_norm;
  };

  CounterexampleReport report;
  report.word = word;
  report.samples = samples;
  report.seed = seed;

  double best = std::numeric_limits<double>::infinity();
  std::optional<PDMatrix> best_a;
  for (std::int64_t t = 0; t < samples; ++t) {
    const std::uint64_t ts = static_cast<std::uint64_t>(t);
    const double cond = log_uniform(seed, 2 * ts, 1.0, 100.0);
    PDMatrix a = random_pd(n, derive_seed(seed, 2 * ts + 1), cond);
    const double r = residual(a);
    if (r < best) {
      best = r;
      best_a = std::move(a);
    }
  }
  report.sampled_min_residual = best;

  // Compass-search polish in log space: A = exp(S) keeps every iterate
  // positive definite without constraints.
  Matrix s_log;
  {
    const SpectralDecomposition eig = best_a->decomposition();
    Eigen::VectorXd lam(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::log(eig.eigenvalues(i));
    s_log = eig.unitary * lam.asDiagonal() * eig.unitary.adjoint();
  }
  std::vector<double> x = coords_from_hermitian(s_log);
  double current = best;
  double step = 0.25;
  int evals = 0;
  const int eval_budget = 20000;
  while (step > 1e-6 && evals < eval_budget) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size() && evals < eval_budget; ++i) {
      for (const double sign : {1.0, -1.0}) {
        const double saved = x[i];
        x[i] = saved + sign * step;
        const PDMatrix a = exp_hermitian(HermitianMatrix(hermitian_from_coords(x, n)));
        const double r = residual(a);
        ++evals;
        if (r < current) {
          current = r;
          best_a = a;
          improved = true;
          break;
        }
        x[i] = saved;
      }
    }
    if (!improved) step *= 0.5;
  }

  report.polished_min_residual = current;
  report.best_a = std::move(best_a);
  return report;
}

}  // namespace wordeq
