#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wordeq/matcore.hpp"

namespace wordeq {

/// Exact rational with reduced numerator/denominator (denominator > 0).
/// Word exponents are stored as Rationals so normalization and reduction are
/// exact, never floating point.
class Rational {
public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_positive() const { return num_ > 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const;
  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const;

  std::string to_string() const;

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

enum class Letter : char { A = 'A', B = 'B' };

/// One factor of a word: a letter raised to a non-zero rational exponent.
struct Factor {
  Letter letter;
  Rational exponent;

  bool operator==(const Factor& o) const {
    return letter == o.letter && exponent == o.exponent;
  }
};

/// A word in the letters A and B with rational exponents, kept normalized:
/// no zero exponents and no two adjacent factors with the same letter.  The
/// empty word is the identity.
class WordExpr {
public:
  WordExpr() = default;
  explicit WordExpr(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool empty() const { return factors_.empty(); }
  std::size_t size() const { return factors_.size(); }

  bool operator==(const WordExpr& o) const { return factors_ == o.factors_; }
  bool operator!=(const WordExpr& o) const { return !(*this == o); }

private:
  std::vector<Factor> factors_;
};

/// Structural summary of a word.
struct WordShape {
  int class_number = 0;   // number of maximal B-power blocks
  bool symmetric = false; // equal to its reversal
  bool a_positive = false;// symmetric with every A exponent positive
  Rational s_a;           // sum of A exponents
  Rational s_b_pos;       // sum of positive B exponents
  Rational s_b_neg;       // sum of |negative B exponents|
};

/// Result of maximal power detection: word == base^k with k maximal among
/// roots expressible without introducing new exponent denominators.
struct PowerDecomposition {
  WordExpr base;
  std::int64_t k = 1;
};

/// Parses the word grammar:
///   word   := ws? factor (ws? factor)* ws?
///   factor := letter exp?
///   letter := "A" | "B"
///   exp    := "^" signed | "^(" signed ("/" unsigned)? ")"
/// Fractional exponents require parentheses.  An empty (or all-whitespace)
/// input denotes the identity word, matching the canonical printer.
WordExpr parse_word(std::string_view text);

/// Canonical printer: single spaces between factors; exponent omitted when 1;
/// parentheses exactly when the exponent is negative or fractional.
/// parse_word(print_word(w)) == w for every word.
std::string print_word(const WordExpr& w);

/// Merges adjacent same-letter factors (exact rational sums) and drops zero
/// exponents, repeating until a fixpoint.
WordExpr normalize(std::vector<Factor> factors);

/// Reversal (the factor list reversed).  For positive definite letters the
/// evaluation of the reversal is the conjugate transpose of the evaluation,
/// so symmetric words (w == reversal(w)) take Hermitian values.
WordExpr reversal(const WordExpr& w);

/// Concatenation, normalized.
WordExpr concat(const WordExpr& u, const WordExpr& v);

WordShape shape(const WordExpr& w);

/// Evaluates the word at positive definite letters via primary matrix
/// powers.  For symmetric words the result is Hermitized and checked to have
/// positive eigenvalues before being returned.
Matrix evaluate(const WordExpr& w, const PDMatrix& a, const PDMatrix& b);

/// Evaluation of a symmetric word as a validated positive definite matrix.
PDMatrix evaluate_pd(const WordExpr& w, const PDMatrix& a, const PDMatrix& b);

/// Checks the inverse identity S(A,B)^{-1} == S'(A^{-1},B^{-1}) where S' is
/// the same word, within relative tolerance tol.
bool evaluate_inverse_identity_check(const WordExpr& w, const PDMatrix& a,
                                     const PDMatrix& b, double tol = 1e-9);

/// Finds the maximal k >= 1 and base with normalize(base^k) == w, where base
/// uses no exponent denominators beyond those already present in w.  Handles
/// plain repetition, merged-junction repetition and conjugated powers
/// u v^k u^{-1}.  k == 1 means w is not a proper power.
PowerDecomposition detect_power(const WordExpr& w);

/// Repeats a word k times (normalized).
WordExpr word_power(const WordExpr& w, std::int64_t k);

}  // namespace wordeq
