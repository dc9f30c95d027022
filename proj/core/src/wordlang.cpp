#include "wordeq/wordlang.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <numeric>
#include <optional>

namespace wordeq {

namespace {

std::int64_t checked_int64(__int128 v, const char* what) {
  if (v > std::numeric_limits<std::int64_t>::max() ||
      v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(std::string(what) + ": exponent arithmetic overflow");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  num_ = (g != 0) ? num / g : 0;
  den_ = (g != 0) ? den / g : 1;
}

Rational Rational::operator-() const { return Rational(-num_, den_); }

namespace {

// Reduce in 128-bit before the range check so mid-sized intermediates survive.
Rational make_reduced(__int128 n, __int128 d, const char* what) {
  if (n != 0) {
    __int128 a = n < 0 ? -n : n, b = d;
    while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
    }
    n /= a;
    d /= a;
  } else {
    d = 1;
  }
  return Rational(checked_int64(n, what), checked_int64(d, what));
}

}  // namespace

Rational Rational::operator+(const Rational& o) const {
  const __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
  const __int128 d = static_cast<__int128>(den_) * o.den_;
  return make_reduced(n, d, "Rational::operator+");
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
  const __int128 n = static_cast<__int128>(num_) * o.num_;
  const __int128 d = static_cast<__int128>(den_) * o.den_;
  return make_reduced(n, d, "Rational::operator*");
}

Rational Rational::operator/(const Rational& o) const {
  if (o.num_ == 0) throw std::invalid_argument("Rational: division by zero");
  return *this * Rational(o.den_, o.num_);
}

bool Rational::operator<(const Rational& o) const {
  return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

WordExpr::WordExpr(std::vector<Factor> factors) {
  // Single left-to-right pass with a merge stack reaches the normalization
  // fixpoint: a cancellation that empties a factor exposes the previous one
  // to the next input factor automatically.
  factors_.reserve(factors.size());
  for (const Factor& f : factors) {
    if (f.exponent.is_zero()) continue;
    if (!factors_.empty() && factors_.back().letter == f.letter) {
      const Rational sum = factors_.back().exponent + f.exponent;
      if (sum.is_zero()) {
        factors_.pop_back();
      } else {
        factors_.back().exponent = sum;
      }
    } else {
      factors_.push_back(f);
    }
  }
}

WordExpr normalize(std::vector<Factor> factors) { return WordExpr(std::move(factors)); }

WordExpr reversal(const WordExpr& w) {
  std::vector<Factor> fs(w.factors().rbegin(), w.factors().rend());
  return normalize(std::move(fs));
}

WordExpr concat(const WordExpr& u, const WordExpr& v) {
  std::vector<Factor> fs = u.factors();
  fs.insert(fs.end(), v.factors().begin(), v.factors().end());
  return normalize(std::move(fs));
}

WordExpr word_power(const WordExpr& w, std::int64_t k) {
  if (k < 0) throw std::invalid_argument("word_power: negative repetition count");
  std::vector<Factor> fs;
  fs.reserve(w.size() * static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) {
    fs.insert(fs.end(), w.factors().begin(), w.factors().end());
  }
  return normalize(std::move(fs));
}

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool at_end() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos;
  }
};

std::int64_t parse_digits(Cursor& cur) {
  if (cur.at_end() || !std::isdigit(static_cast<unsigned char>(cur.peek()))) {
    throw ParseError("expected digits", cur.pos);
  }
  std::int64_t value = 0;
  int count = 0;
  while (!cur.at_end() && std::isdigit(static_cast<unsigned char>(cur.peek()))) {
    if (++count > 18) throw ParseError("integer literal too large", cur.pos);
    value = value * 10 + (cur.peek() - '0');
    ++cur.pos;
  }
  return value;
}

std::int64_t parse_signed(Cursor& cur) {
  bool negative = false;
  if (!cur.at_end() && cur.peek() == '-') {
    negative = true;
    ++cur.pos;
  }
  const std::int64_t value = parse_digits(cur);
  return negative ? -value : value;
}

Rational parse_exponent(Cursor& cur) {
  ++cur.pos;  // consume '^'
  if (cur.at_end()) throw ParseError("expected exponent after '^'", cur.pos);
  if (cur.peek() == '(') {
    ++cur.pos;
    const std::int64_t num = parse_signed(cur);
    std::int64_t den = 1;
    if (!cur.at_end() && cur.peek() == '/') {
      ++cur.pos;
      const std::size_t den_pos = cur.pos;
      den = parse_digits(cur);
      if (den == 0) throw ParseError("zero denominator in exponent", den_pos);
    }
    if (cur.at_end() || cur.peek() != ')') {
      throw ParseError("expected ')' to close exponent", cur.pos);
    }
    ++cur.pos;
    return Rational(num, den);
  }
  return Rational(parse_signed(cur));
}

}  // namespace

WordExpr parse_word(std::string_view text) {
  Cursor cur{text};
  std::vector<Factor> factors;
  cur.skip_ws();
  while (!cur.at_end()) {
    const char c = cur.peek();
    Letter letter;
    if (c == 'A') {
      letter = Letter::A;
    } else if (c == 'B') {
      letter = Letter::B;
    } else {
      throw ParseError("expected letter 'A' or 'B'", cur.pos);
    }
    ++cur.pos;
    Rational exponent(1);
    if (!cur.at_end() && cur.peek() == '^') {
      exponent = parse_exponent(cur);
    }
    factors.push_back(Factor{letter, exponent});
    cur.skip_ws();
  }
  return normalize(std::move(factors));
}

std::string print_word(const WordExpr& w) {
  std::string out;
  bool first = true;
  for (const Factor& f : w.factors()) {
    if (!first) out += ' ';
    first = false;
    out += static_cast<char>(f.letter);
    const Rational& e = f.exponent;
    if (e == Rational(1)) continue;
    out += '^';
    if (e.is_integer() && e.is_positive()) {
      out += e.to_string();
    } else {
      out += '(';
      out += e.to_string();
      out += ')';
    }
  }
  return out;
}

WordShape shape(const WordExpr& w) {
  WordShape sh;
  sh.symmetric = (w == reversal(w));
  bool all_a_positive = true;
  for (const Factor& f : w.factors()) {
    if (f.letter == Letter::A) {
      sh.s_a = sh.s_a + f.exponent;
      if (!f.exponent.is_positive()) all_a_positive = false;
    } else {
      ++sh.class_number;
      if (f.exponent.is_positive()) {
        sh.s_b_pos = sh.s_b_pos + f.exponent;
      } else {
        sh.s_b_neg = sh.s_b_neg + (-f.exponent);
      }
    }
  }
  sh.a_positive = sh.symmetric && all_a_positive;
  return sh;
}

namespace {

// Word evaluation multiplies per-factor primary powers.  Each distinct
// (letter, exponent) power is computed once from the letter's cached
// eigendecomposition.
class PowerCache {
public:
  explicit PowerCache(const PDMatrix& m) : m_(m) {}

  const Matrix& get(const Rational& e) {
    auto key = std::make_pair(e.numerator(), e.denominator());
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(key, power_from_decomposition(m_.decomposition(), e.to_double()))
               .first;
    }
    return it->second;
  }

private:
  const PDMatrix& m_;
  std::map<std::pair<std::int64_t, std::int64_t>, Matrix> cache_;
};

}  // namespace

Matrix evaluate(const WordExpr& w, const PDMatrix& a, const PDMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("evaluate: letter dimensions differ");
  }
  const Eigen::Index n = a.dim();
  PowerCache pow_a(a);
  PowerCache pow_b(b);
  Matrix result = Matrix::Identity(n, n);
  for (const Factor& f : w.factors()) {
    const Matrix& p = (f.letter == Letter::A) ? pow_a.get(f.exponent) : pow_b.get(f.exponent);
    result = result * p;
  }
  if (shape(w).symmetric) {
    result = 0.5 * (result + result.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(result, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("evaluate: eigensolver did not converge");
    }
    if (!(solver.eigenvalues()(0) > 0.0)) {
      throw NumericalError(
          "evaluate: symmetric word value lost positive definiteness numerically");
    }
  }
  return result;
}

PDMatrix evaluate_pd(const WordExpr& w, const PDMatrix& a, const PDMatrix& b) {
  if (!shape(w).symmetric) {
    throw std::invalid_argument("evaluate_pd: word must be symmetric");
  }
  return PDMatrix(evaluate(w, a, b));
}

bool evaluate_inverse_identity_check(const WordExpr& w, const PDMatrix& a,
                                     const PDMatrix& b, double tol) {
  const Matrix lhs = evaluate(w, a, b).inverse();
  const Matrix rhs = evaluate(w, a.inverse(), b.inverse());
  return (lhs - rhs).norm() <= tol * lhs.norm();
}

namespace {

bool repeats_to(const std::vector<Factor>& v, std::int64_t k,
                const std::vector<Factor>& target) {
  std::vector<Factor> rep;
  rep.reserve(v.size() * static_cast<std::size_t>(k));
  for (std::int64_t i = 0; i < k; ++i) rep.insert(rep.end(), v.begin(), v.end());
  return normalize(std::move(rep)).factors() == target;
}

}  // namespace

PowerDecomposition detect_power(const WordExpr& w) {
  if (w.empty()) return PowerDecomposition{w, 1};

  // Peel whole-factor conjugators: w = u . core . u^{-1} where the outermost
  // factors cancel exactly.  Any root of w is then u times a root of the core
  // times u^{-1}, so maximality is preserved.
  std::vector<Factor> core = w.factors();
  std::vector<Factor> conjugator;
  while (core.size() >= 3 && core.front().letter == core.back().letter &&
         (core.front().exponent + core.back().exponent).is_zero()) {
    conjugator.push_back(core.front());
    core.erase(core.begin());
    core.pop_back();
  }

  std::vector<Factor> base_core = core;
  std::int64_t best_k = 1;

  if (core.size() == 1) {
    // Single factor L^e: the maximal root without new denominators is
    // L^(e/|num|) repeated |num| times.
    const std::int64_t k = std::llabs(core[0].exponent.numerator());
    if (k >= 2) {
      best_k = k;
      base_core = {Factor{core[0].letter, core[0].exponent / Rational(k)}};
    }
  } else {
    const std::int64_t m = static_cast<std::int64_t>(core.size());
    for (std::int64_t k = m; k >= 2 && best_k == 1; --k) {
      // Verbatim repetition: core = V^k with V's end letters distinct, so no
      // factors merge at the junctions and m = k * |V|.
      if (m % k == 0) {
        const std::int64_t r = m / k;
        if (r >= 2) {
          std::vector<Factor> v(core.begin(), core.begin() + r);
          if (v.front().letter != v.back().letter && repeats_to(v, k, core)) {
            best_k = k;
            base_core = std::move(v);
            break;
          }
        }
      }
      // Merged-junction repetition: V's end letters coincide, each junction
      // merges a pair of factors and m = k * (|V| - 1) + 1.  The closing
      // exponent of V is recovered from the first junction.
      if ((m - 1) % k == 0) {
        const std::int64_t r_minus_1 = (m - 1) / k;
        if (r_minus_1 >= 2) {
          const Factor& junction = core[static_cast<std::size_t>(r_minus_1)];
          if (junction.letter == core[0].letter) {
            const Rational closing = junction.exponent - core[0].exponent;
            if (!closing.is_zero()) {
              std::vector<Factor> v(core.begin(), core.begin() + r_minus_1);
              v.push_back(Factor{junction.letter, closing});
              if (repeats_to(v, k, core)) {
                best_k = k;
                base_core = std::move(v);
                break;
              }
            }
          }
        }
      }
    }
  }

  std::vector<Factor> base = conjugator;
  base.insert(base.end(), base_core.begin(), base_core.end());
  for (auto it = conjugator.rbegin(); it != conjugator.rend(); ++it) {
    base.push_back(Factor{it->letter, -it->exponent});
  }
  return PowerDecomposition{normalize(std::move(base)), best_k};
}

}  // namespace wordeq
