#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "wordeq/matcore.hpp"
#include "wordeq/wordlang.hpp"

namespace testutil {

using wordeq::Complex;
using wordeq::Factor;
using wordeq::Letter;
using wordeq::Matrix;
using wordeq::PDMatrix;
using wordeq::Rational;
using wordeq::WordExpr;

/// Deterministic uniform/integer source for test-case generation.
class TestRng {
public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return lo * std::pow(hi / lo, uniform());
  }

  std::int64_t pick(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool flip() { return (gen_() & 1) != 0; }

  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
};

struct WordGenOptions {
  int max_half_factors = 3;   // factors in the mirrored half
  bool fractional_a = false;  // allow denominators 2, 3 on A exponents
  bool fractional_b = false;
  bool negative_a = false;    // allow negative A exponents
  bool negative_b = true;     // allow negative B exponents
  int max_numerator = 3;
};

inline Rational random_exponent(TestRng& rng, bool fractional, bool negative,
                                int max_num) {
  const std::int64_t num = rng.pick(1, max_num);
  const std::int64_t den = fractional ? rng.pick(1, 3) : 1;
  const bool neg = negative && rng.flip();
  return Rational(neg ? -num : num, den);
}

/// Random symmetric word built as half . center . reverse(half); the factor
/// list is palindromic by construction, and normalization preserves that.
inline WordExpr random_symmetric_word(TestRng& rng, const WordGenOptions& opt) {
  for (;;) {
    std::vector<Factor> half;
    const int len = static_cast<int>(rng.pick(1, opt.max_half_factors));
    for (int i = 0; i < len; ++i) {
      const Letter l = rng.flip() ? Letter::A : Letter::B;
      const bool frac = (l == Letter::A) ? opt.fractional_a : opt.fractional_b;
      const bool neg = (l == Letter::A) ? opt.negative_a : opt.negative_b;
      half.push_back(Factor{l, random_exponent(rng, frac, neg, opt.max_numerator)});
    }
    std::vector<Factor> full = half;
    if (rng.flip()) {
      const Letter l = rng.flip() ? Letter::A : Letter::B;
      const bool frac = (l == Letter::A) ? opt.fractional_a : opt.fractional_b;
      const bool neg = (l == Letter::A) ? opt.negative_a : opt.negative_b;
      full.push_back(Factor{l, random_exponent(rng, frac, neg, opt.max_numerator)});
    }
    for (auto it = half.rbegin(); it != half.rend(); ++it) full.push_back(*it);
    const WordExpr w = wordeq::normalize(std::move(full));
    if (!w.empty()) return w;
  }
}

/// Random symmetric word containing at least one A, every A exponent
/// positive: a valid equation left-hand side.
inline WordExpr random_equation_word(TestRng& rng, WordGenOptions opt) {
  opt.negative_a = false;
  for (;;) {
    const WordExpr w = random_symmetric_word(rng, opt);
    const wordeq::WordShape sh = wordeq::shape(w);
    if (sh.a_positive && sh.s_a.is_positive()) return w;
  }
}

/// Scalar (1x1) word value: the independent oracle for evaluation.
inline double scalar_word_value(const WordExpr& w, double a, double b) {
  double v = 1.0;
  for (const Factor& f : w.factors()) {
    v *= std::pow(f.letter == Letter::A ? a : b, f.exponent.to_double());
  }
  return v;
}

/// Scalar solution of word(a, b) = p: a = (p * b^{-s_b})^{1/s_a}.
inline double scalar_word_solution(const WordExpr& w, double b, double p) {
  double s_a = 0.0, s_b = 0.0;
  for (const Factor& f : w.factors()) {
    (f.letter == Letter::A ? s_a : s_b) += f.exponent.to_double();
  }
  return std::pow(p * std::pow(b, -s_b), 1.0 / s_a);
}

/// Random Hermitian matrix with entries of order `scale`.
inline Matrix random_hermitian(TestRng& rng, Eigen::Index n, double scale) {
  Matrix h(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    h(i, i) = Complex(rng.uniform(-scale, scale), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex z(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  }
  return h;
}

/// Raw product evaluation of a word with positive integer exponents at a
/// (not necessarily definite) Hermitian A: the oracle for linearization
/// remainder tests, independent of the solver's compiled form.
inline Matrix integer_word_value(const WordExpr& w, const Matrix& a, const Matrix& b_pd) {
  const Eigen::Index n = a.rows();
  Matrix value = Matrix::Identity(n, n);
  for (const Factor& f : w.factors()) {
    const Matrix& base_b = b_pd;
    if (f.letter == Letter::A) {
      for (std::int64_t i = 0; i < f.exponent.numerator(); ++i) value = value * a;
    } else {
      // B exponents here are required to be integers as well.
      const std::int64_t e = f.exponent.numerator();
      if (e >= 0) {
        for (std::int64_t i = 0; i < e; ++i) value = value * base_b;
      } else {
        const Matrix binv = base_b.inverse();
        for (std::int64_t i = 0; i < -e; ++i) value = value * binv;
      }
    }
  }
  return value;
}

/// Exact-ish convex hull membership oracle for the field of values of a
/// normal matrix: F(C) is the convex hull of the eigenvalues.  Returns the
/// signed distance of 0 to the hull: positive when 0 is outside.
inline double hull_signed_distance(const std::vector<Complex>& pts) {
  // Andrew monotone chain on the eigenvalue cloud.
  std::vector<Complex> p = pts;
  std::sort(p.begin(), p.end(), [](const Complex& x, const Complex& y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  p.erase(std::unique(p.begin(), p.end(),
                      [](const Complex& x, const Complex& y) { return x == y; }),
          p.end());
  auto cross = [](const Complex& o, const Complex& a, const Complex& b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<Complex> hull;
  if (p.size() < 3) {
    hull = p;
  } else {
    std::vector<Complex> lower, upper;
    for (const Complex& q : p) {
      while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), q) <= 0) {
        lower.pop_back();
      }
      lower.push_back(q);
    }
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
      while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), *it) <= 0) {
        upper.pop_back();
      }
      upper.push_back(*it);
    }
    lower.pop_back();
    upper.pop_back();
    hull = lower;
    hull.insert(hull.end(), upper.begin(), upper.end());
  }

  auto segment_distance = [](const Complex& a, const Complex& b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    double t = 0.0;
    if (len2 > 0.0) {
      t = std::clamp((-a.real() * ab.real() - a.imag() * ab.imag()) / len2, 0.0, 1.0);
    }
    return std::abs(a + t * ab);
  };

  if (hull.size() == 1) return std::abs(hull[0]);
  if (hull.size() == 2) return segment_distance(hull[0], hull[1]);

  bool inside = true;
  double min_edge = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Complex& a = hull[i];
    const Complex& b = hull[(i + 1) % hull.size()];
    if (cross(a, b, Complex(0, 0)) < 0) inside = false;
    min_edge = std::min(min_edge, segment_distance(a, b));
  }
  return inside ? -min_edge : min_edge;
}

}  // namespace testutil
