#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wordeq/matcore.hpp"
#include "wordeq/wordlang.hpp"

namespace wordeq {

/// A symmetric word equation S(A, B) = P with A unknown.  Construction
/// validates: the word is symmetric, every A exponent is positive, at least
/// one A factor is present, and B and P have matching dimensions.
class Equation {
public:
  Equation(WordExpr word, PDMatrix b, PDMatrix p);

  const WordExpr& word() const { return word_; }
  const PDMatrix& b() const { return b_; }
  const PDMatrix& p() const { return p_; }

private:
  WordExpr word_;
  PDMatrix b_;
  PDMatrix p_;
};

/// One applied equivalence step.  `amount` records the rule parameter:
/// the stripped outer B exponent, the extracted root k, or the A-exponent
/// scaling factor L.
struct ReductionStep {
  enum class Kind { StripOuterB, RootReduce, RescaleA };
  Kind kind;
  Rational amount;
};

const char* to_string(ReductionStep::Kind kind);

/// Ordered record of the steps applied by reduce_fully, oldest first.
struct ReductionTrail {
  std::vector<ReductionStep> steps;
};

/// Rule: B^s S B^s = P is equivalent to S = B^{-s} P B^{-s}.  Applies when
/// the word starts and ends with B factors (symmetry forces equal
/// exponents).  Returns the transformed equation and the step taken, or
/// nothing if the rule does not apply.
std::optional<std::pair<Equation, ReductionStep>> strip_outer_b(const Equation& eq);

/// Rule: if the word is V^k (k >= 2) with V symmetric, then V^k = P is
/// equivalent to V = P^{1/k} by uniqueness of positive definite roots.
std::optional<std::pair<Equation, ReductionStep>> root_reduce(const Equation& eq);

/// Rule: substituting X = A^{1/L} with L the least common multiple of the
/// A-exponent denominators turns every A exponent into an integer.  The
/// solution of the original equation is recovered as A = X^L.
std::optional<std::pair<Equation, ReductionStep>> rescale_a_to_integer(const Equation& eq);

/// Applies strip_outer_b, then root_reduce, then rescale_a_to_integer, in
/// that priority, looping until no rule applies.  Terminates because every
/// rule strictly decreases the measure (factor count, lcm of A-exponent
/// denominators, sum of |exponent numerators|) in lexicographic order.
std::pair<Equation, ReductionTrail> reduce_fully(const Equation& eq);

/// Maps a solution of the fully reduced equation back to a solution of the
/// original one.  Only RescaleA steps change the unknown (A = X^L); the
/// other rules transform P alone.
PDMatrix map_back(const ReductionTrail& trail, const PDMatrix& reduced_solution);

}  // namespace wordeq
