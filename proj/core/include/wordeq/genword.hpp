#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wordeq/matcore.hpp"
#include "wordeq/solver.hpp"
#include "wordeq/wordlang.hpp"

namespace wordeq {

/// A generalized symmetric word W = H H* described by its left half
///   H = A^{e_1} C_1 A^{e_2} C_2 ... ,
/// an alternation of positive A-exponents with invertible coefficient
/// matrices C_i, ending either with a coefficient (the word's center is then
/// C_m C_m*) or with an A-power A^{e_h} (center A^{2 e_h}).  W equals the
/// conjugate-transpose reversal of itself by construction, and evaluates to
/// a positive definite matrix whenever A is positive definite and every C_i
/// is invertible.
class GenSymWord {
public:
  /// a_exponents: e_1..e_h (all positive); coeff_count m is either h
  /// (half ends with C_m) or h - 1 (half ends with the A-power).
  GenSymWord(std::vector<Rational> a_exponents, int coeff_count);

  const std::vector<Rational>& a_exponents() const { return a_exponents_; }
  int coeff_count() const { return coeff_count_; }
  bool center_is_fold() const {
    return coeff_count_ == static_cast<int>(a_exponents_.size());
  }

private:
  std::vector<Rational> a_exponents_;
  int coeff_count_;
};

/// Parses a half description such as "A^2 C1 A C2" or "A C1 A^(1/2)":
/// whitespace-separated tokens, alternating A-powers (word-grammar
/// exponents, positive) with coefficients C1, C2, ... numbered consecutively
/// from 1.
GenSymWord parse_gen_half(std::string_view text);

/// Canonical printer for the half description; parse_gen_half round-trips.
std::string print_gen_half(const GenSymWord& w);

/// Field-of-values certificate for a coefficient.  margin is
/// max over theta of lambda_min(Re(e^{i theta} C)): positive exactly when 0
/// lies outside the field of values F(C), which certifies that every
/// generalized word with coefficient C is invertible (complete
/// invertibility).  theta_star attains the margin.
struct FovCertificate {
  bool contains_zero = true;
  double margin = 0.0;
  double theta_star = 0.0;
  int grid_points = 0;
};

/// Certifies 0 outside/inside the field of values by scanning 720 grid
/// angles and refining every grid-local maximum of the rotated-real-part
/// minimum eigenvalue with golden-section search to 1e-12 angle accuracy.
FovCertificate is_completely_invertible(const Matrix& c);

/// Evaluates W(A; C_1..C_m) = H H* as a validated positive definite matrix.
/// Coefficients must be square, dimension-matched and nonsingular
/// (condition estimate below 1e14).
PDMatrix evaluate_genword(const GenSymWord& w, const PDMatrix& a,
                          const std::vector<Matrix>& coeffs);

struct GenSolveReport {
  SolveReport report;
  std::vector<FovCertificate> certificates;  // one per coefficient
};

/// Solves W(A; C_1..C_m) = P for positive definite A with the damped Newton
/// engine, after rescaling A-exponents to integers (A = X^L).  Coefficients
/// whose field of values contains 0 are reported in the certificates but do
/// not block the solve.
GenSolveReport solve_genword(const GenSymWord& w, const std::vector<Matrix>& coeffs,
                             const PDMatrix& p, const SolveOptions& opts = {});

}  // namespace wordeq
