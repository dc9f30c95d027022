#pragma once

#include <optional>
#include <vector>

#include "wordeq/matcore.hpp"
#include "wordeq/reducer.hpp"
#include "wordeq/wordlang.hpp"

namespace wordeq {

struct SolveOptions {
  double tol = 1e-10;       // relative Frobenius residual target
  int max_iters = 100;      // Newton iterations per start
  int max_halvings = 30;    // damping bisections per iteration
  int starts = 8;           // multi-start budget (first start: scaled identity)
  std::uint64_t seed = 0;   // stream for the fallback random starts
  double start_scale = 1.0; // multiplier on the calibrated initial scale
};

enum class SolveMethod { ClosedFormPower, ClosedFormABA, Newton };

const char* to_string(SolveMethod method);

struct SolveReport {
  std::optional<PDMatrix> solution;    // absent when no start converged
  bool converged = false;
  double relative_residual = 0.0;      // against the equation handed to solve()
  int iterations = 0;                  // Newton steps, summed over all starts
  std::vector<double> residual_history;// per-iteration residuals of the
                                       // successful (or best failing) start
  ReductionTrail trail;                // equivalence steps applied up front
  int starts_used = 0;
  double dispersion = 0.0;             // populated by uniqueness probes
  SolveMethod method = SolveMethod::Newton;
};

/// One multiplicative factor of a compiled word: either the unknown raised
/// to a positive integer power, or a fixed coefficient matrix.
struct ProductFactor {
  int a_power = 0;     // > 0: unknown^a_power; == 0: coefficient
  Matrix coefficient;  // valid when a_power == 0
};

/// Compiles a word to product form, evaluating the B powers against a fixed
/// letter.  Requires every A exponent to be a positive integer; fractional
/// exponents must be removed by rescale_a_to_integer first.
std::vector<ProductFactor> compile_word(const WordExpr& w, const PDMatrix& b);

/// First-order expansion of the word at A0: keeping terms linear in D,
///   S(A0 + D, B) = constant + unvec(op * vec(D)) + O(D^2),
/// built from vec(L D R) = (R^T otimes L) vec(D) summed over every position
/// of every A-power where one A is replaced by D.
struct LinearizedSystem {
  Matrix op;        // n^2 x n^2
  Matrix constant;  // word value at A0 (Hermitian for symmetric words)
};

LinearizedSystem linearize(const WordExpr& w, const HermitianMatrix& a0, const PDMatrix& b);
LinearizedSystem linearize_product(const std::vector<ProductFactor>& product, const Matrix& a0);

/// Outcome of one damped-Newton run from a single starting point.
struct NewtonRun {
  bool converged = false;
  Matrix solution;      // last iterate (Hermitian), PD on convergence
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

/// Single-start damped Newton: least-squares step on the linearized system,
/// Hermitized, with the step halved until the residual strictly decreases.
NewtonRun newton_from_point(const std::vector<ProductFactor>& product, const PDMatrix& p,
                            const Matrix& start, const SolveOptions& opts);

/// Multi-start Newton on a compiled product.  The first start is
/// scalar_start * identity with scalar_start calibrated from the scalarized
/// equation; later starts are seeded random positive definite matrices (real
/// ones when the whole problem is real).  A converged iterate must validate
/// as positive definite or the start is discarded.
SolveReport newton_solve_product(const std::vector<ProductFactor>& product, const PDMatrix& p,
                                 const SolveOptions& opts, double scalar_start);

/// Newton solve of an equation whose A exponents are positive integers.
SolveReport newton_solve(const Equation& eq, const SolveOptions& opts);

/// Closed form for A^q = P: the primary power A = P^{1/q}.
PDMatrix solve_power(const Rational& q, const PDMatrix& p);

/// Closed form for A B A = P:
///   A = B^{-1/2} (B^{1/2} P B^{1/2})^{1/2} B^{-1/2},
/// equivalently the geometric mean of B^{-1} and P.
PDMatrix solve_aba(const PDMatrix& b, const PDMatrix& p);

/// Full solve: reduce the equation, dispatch to a closed form when the
/// reduced word is a pure A power or fits A^p B^q A^p, otherwise run Newton;
/// then map the solution back through the reduction trail.  The reported
/// residual is measured against the original equation.
SolveReport solve(const Equation& eq, const SolveOptions& opts = {});

/// Evidence gathering for uniqueness: solves from `starts` independent
/// random starting points and measures the spread of the converged
/// solutions.
struct UniquenessReport {
  int starts = 0;
  int converged = 0;
  std::vector<PDMatrix> solutions;   // mapped back to the original unknown
  std::vector<double> residuals;
  double dispersion = 0.0;           // max pairwise relative Frobenius gap
};

UniquenessReport uniqueness_probe(const Equation& eq, const SolveOptions& opts = {});

/// Contraction-style map on {X PSD : ||X|| <= 1} associated with an
/// equation whose word factors as A . S . A:
///   f_k(X) = geomean(P, S(X + I/k, B)^{-1}) / g_k(X)
/// with the normalizer
///   g_k(X) = ||P|| ||P^{-1}||^{1/2} ||B||^{s_b_neg/2} ||B^{-1}||^{s_b_pos/2}
///            ||(X + I/k)^{-1}||^{s_a/2}
/// where the shape sums are those of the inner word S.  The image is
/// positive semidefinite with norm at most 1; for n = 1 the map is
/// identically the scalar 1.
PDMatrix fixed_point_map(const HermitianMatrix& x, const Equation& eq, std::int64_t k);

/// Relative Frobenius residual ||S(A, B) - P|| / ||P|| of a candidate.
double verify(const Equation& eq, const PDMatrix& a);

}  // namespace wordeq
