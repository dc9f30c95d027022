#include "wordeq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wordeq {

const char* to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::ClosedFormPower: return "ClosedFormPower";
    case SolveMethod::ClosedFormABA: return "ClosedFormABA";
    case SolveMethod::Newton: return "Newton";
  }
  return "?";
}

std::vector<ProductFactor> compile_word(const WordExpr& w, const PDMatrix& b) {
  std::vector<ProductFactor> product;
  product.reserve(w.size());
  for (const Factor& f : w.factors()) {
    if (f.letter == Letter::A) {
      if (!f.exponent.is_integer() || !f.exponent.is_positive()) {
        throw std::invalid_argument(
            "compile_word: A exponents must be positive integers; rescale the "
            "equation first");
      }
      ProductFactor pf;
      pf.a_power = static_cast<int>(f.exponent.numerator());
      product.push_back(std::move(pf));
    } else {
      ProductFactor pf;
      pf.coefficient = power_from_decomposition(b.decomposition(), f.exponent.to_double());
      product.push_back(std::move(pf));
    }
  }
  return product;
}

namespace {

Eigen::VectorXcd vec(const Matrix& m) {
  return Eigen::Map<const Eigen::VectorXcd>(m.data(), m.size());
}

Matrix unvec(const Eigen::VectorXcd& v, Eigen::Index n) {
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

// k += kron(r^T, l), the operator of D -> l * D * r under column-major vec.
void add_kron_lr(Matrix& k, const Matrix& l, const Matrix& r) {
  const Eigen::Index n = l.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      k.block(i * n, j * n, n, n) += r(j, i) * l;
    }
  }
}

int max_a_power(const std::vector<ProductFactor>& product) {
  int m = 0;
  for (const ProductFactor& pf : product) m = std::max(m, pf.a_power);
  return m;
}

std::vector<Matrix> a_power_table(const Matrix& a, int up_to) {
  std::vector<Matrix> pows;
  pows.reserve(static_cast<std::size_t>(up_to) + 1);
  pows.push_back(Matrix::Identity(a.rows(), a.cols()));
  for (int j = 1; j <= up_to; ++j) pows.push_back(pows.back() * a);
  return pows;
}

Matrix product_value(const std::vector<ProductFactor>& product, const Matrix& a) {
  const std::vector<Matrix> pows = a_power_table(a, max_a_power(product));
  Matrix value = Matrix::Identity(a.rows(), a.cols());
  for (const ProductFactor& pf : product) {
    value = value * (pf.a_power > 0 ? pows[static_cast<std::size_t>(pf.a_power)]
                                    : pf.coefficient);
  }
  return value;
}

double relative_residual(const std::vector<ProductFactor>& product, const Matrix& a,
                         const PDMatrix& p) {
  return (p.matrix() - product_value(product, a)).norm() / p.matrix().norm();
}

bool effectively_real(const Matrix& m) {
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return m.imag().cwiseAbs().maxCoeff() <= 1e-13 * scale;
}

bool problem_is_real(const std::vector<ProductFactor>& product, const PDMatrix& p) {
  if (!effectively_real(p.matrix())) return false;
  for (const ProductFactor& pf : product) {
    if (pf.a_power == 0 && !effectively_real(pf.coefficient)) return false;
  }
  return true;
}

std::optional<PDMatrix> try_pd(const Matrix& a) {
  try {
    return PDMatrix(Matrix(0.5 * (a + a.adjoint().eval())));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

LinearizedSystem linearize_product(const std::vector<ProductFactor>& product,
                                   const Matrix& a0) {
  const Eigen::Index n = a0.rows();
  const std::vector<Matrix> pows = a_power_table(a0, max_a_power(product));
  const std::size_t count = product.size();

  std::vector<Matrix> prefix(count + 1), suffix(count + 1);
  prefix[0] = Matrix::Identity(n, n);
  for (std::size_t i = 0; i < count; ++i) {
    const ProductFactor& pf = product[i];
    const Matrix& value =
        pf.a_power > 0 ? pows[static_cast<std::size_t>(pf.a_power)] : pf.coefficient;
    prefix[i + 1] = prefix[i] * value;
  }
  suffix[count] = Matrix::Identity(n, n);
  for (std::size_t i = count; i-- > 0;) {
    const ProductFactor& pf = product[i];
    const Matrix& value =
        pf.a_power > 0 ? pows[static_cast<std::size_t>(pf.a_power)] : pf.coefficient;
    suffix[i] = value * suffix[i + 1];
  }

  LinearizedSystem sys;
  sys.op = Matrix::Zero(n * n, n * n);
  sys.constant = prefix[count];
  for (std::size_t i = 0; i < count; ++i) {
    const int m = product[i].a_power;
    for (int j = 0; j < m; ++j) {
      const Matrix l = prefix[i] * pows[static_cast<std::size_t>(j)];
      const Matrix r = pows[static_cast<std::size_t>(m - 1 - j)] * suffix[i + 1];
      add_kron_lr(sys.op, l, r);
    }
  }
  return sys;
}

LinearizedSystem linearize(const WordExpr& w, const HermitianMatrix& a0, const PDMatrix& b) {
  if (a0.dim() != b.dim()) {
    throw std::invalid_argument("linearize: dimension mismatch");
  }
  return linearize_product(compile_word(w, b), a0.matrix());
}

NewtonRun newton_from_point(const std::vector<ProductFactor>& product, const PDMatrix& p,
                            const Matrix& start, const SolveOptions& opts) {
  const Eigen::Index n = p.dim();
  NewtonRun run;
  Matrix a = start;
  double res = relative_residual(product, a, p);
  run.history.push_back(res);

  while (res > opts.tol && run.iterations < opts.max_iters) {
    const LinearizedSystem sys = linearize_product(product, a);
    const Eigen::VectorXcd rhs = vec(Matrix(p.matrix() - sys.constant));
    // Least-squares (minimum-norm) step: tolerant of rank deficiency in the
    // linearized operator.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sys.op);
    Matrix d = unvec(cod.solve(rhs), n);
    d = 0.5 * (d + d.adjoint().eval());

    double alpha = 1.0;
    bool improved = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      const Matrix trial = a + alpha * d;
      const double trial_res = relative_residual(product, trial, p);
      if (trial_res < res) {
        a = trial;
        res = trial_res;
        improved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!improved) break;  // stalled; caller moves to the next start
    ++run.iterations;
    run.history.push_back(res);
  }

  run.solution = 0.5 * (a + a.adjoint().eval());
  run.residual = res;
  run.converged = res <= opts.tol;
  return run;
}

SolveReport newton_solve_product(const std::vector<ProductFactor>& product, const PDMatrix& p,
                                 const SolveOptions& opts, double scalar_start) {
  if (opts.starts < 1) throw std::invalid_argument("newton_solve_product: starts must be >= 1");
  const Eigen::Index n = p.dim();
  if (!(scalar_start > 0.0) || !std::isfinite(scalar_start)) scalar_start = 1.0;
  const bool real_problem = problem_is_real(product, p);

  SolveReport report;
  report.method = SolveMethod::Newton;
  double best_res = std::numeric_limits<double>::infinity();
  Matrix best_a;
  std::vector<double> best_history;

  for (int s = 0; s < opts.starts; ++s) {
    Matrix start;
    if (s == 0) {
      start = scalar_start * Matrix::Identity(n, n);
    } else {
      const std::uint64_t seed = derive_seed(opts.seed, static_cast<std::uint64_t>(s));
      const PDMatrix r = real_problem ? random_pd_real(n, seed, 10.0) : random_pd(n, seed, 10.0);
      start = scalar_start * r.matrix();
    }

    NewtonRun run = newton_from_point(product, p, start, opts);
    report.iterations += run.iterations;
    report.starts_used = s + 1;

    if (run.converged) {
      if (std::optional<PDMatrix> sol = try_pd(run.solution)) {
        report.solution = std::move(sol);
        report.converged = true;
        report.relative_residual = run.residual;
        report.residual_history = std::move(run.history);
        return report;
      }
      // Converged to a non-PD stationary point: treat as a failed start.
    }
    if (run.residual < best_res) {
      best_res = run.residual;
      best_a = run.solution;
      best_history = std::move(run.history);
    }
  }

  report.converged = false;
  report.relative_residual = best_res;
  report.residual_history = std::move(best_history);
  report.solution = try_pd(best_a);  // best effort; may be absent
  return report;
}

namespace {

double scalar_start_for_word(const WordExpr& w, const PDMatrix& b, const PDMatrix& p,
                             double start_scale) {
  const WordShape sh = shape(w);
  const double bn = spectral_norm(b);
  const double pn = spectral_norm(p);
  const double s_b = sh.s_b_pos.to_double() - sh.s_b_neg.to_double();
  const double s_a = sh.s_a.to_double();
  const double c = std::pow(pn * std::pow(bn, -s_b), 1.0 / s_a);
  return c * start_scale;
}

}  // namespace

SolveReport newton_solve(const Equation& eq, const SolveOptions& opts) {
  const std::vector<ProductFactor> product = compile_word(eq.word(), eq.b());
  const double c = scalar_start_for_word(eq.word(), eq.b(), eq.p(), opts.start_scale);
  return newton_solve_product(product, eq.p(), opts, c);
}

PDMatrix solve_power(const Rational& q, const PDMatrix& p) {
  if (q.is_zero()) throw std::invalid_argument("solve_power: exponent must be non-zero");
  return matrix_power(p, 1.0 / q.to_double());
}

PDMatrix solve_aba(const PDMatrix& b, const PDMatrix& p) {
  if (b.dim() != p.dim()) throw std::invalid_argument("solve_aba: dimension mismatch");
  const Matrix b_half = power_from_decomposition(b.decomposition(), 0.5);
  const Matrix b_negh = power_from_decomposition(b.decomposition(), -0.5);
  const PDMatrix inner(Matrix(b_half * p.matrix() * b_half));
  const Matrix inner_half = power_from_decomposition(inner.decomposition(), 0.5);
  return PDMatrix(Matrix(b_negh * inner_half * b_negh));
}

namespace {

bool is_pure_a(const WordExpr& w) {
  return w.size() == 1 && w.factors()[0].letter == Letter::A;
}

bool is_aba_pattern(const WordExpr& w) {
  if (w.size() != 3) return false;
  const auto& fs = w.factors();
  return fs[0].letter == Letter::A && fs[1].letter == Letter::B && fs[2].letter == Letter::A;
}

}  // namespace

SolveReport solve(const Equation& eq, const SolveOptions& opts) {
  auto [reduced, trail] = reduce_fully(eq);

  SolveReport report;
  if (is_pure_a(reduced.word())) {
    report.method = SolveMethod::ClosedFormPower;
    report.converged = true;
    report.solution = solve_power(reduced.word().factors()[0].exponent, reduced.p());
  } else if (is_aba_pattern(reduced.word())) {
    const auto& fs = reduced.word().factors();
    const Rational p_exp = fs[0].exponent;  // integer >= 1 after reduction
    const PDMatrix b_pow = matrix_power(reduced.b(), fs[1].exponent.to_double());
    const PDMatrix y = solve_aba(b_pow, reduced.p());
    report.method = SolveMethod::ClosedFormABA;
    report.converged = true;
    report.solution =
        p_exp == Rational(1) ? y : matrix_power(y, 1.0 / p_exp.to_double());
  } else {
    // Solve the reduced equation a shade tighter than requested so the
    // residual still meets opts.tol after mapping back through the trail.
    SolveOptions inner = opts;
    inner.tol = opts.tol * 0.1;
    report = newton_solve(reduced, inner);
  }

  report.trail = std::move(trail);
  if (report.solution) {
    PDMatrix a = map_back(report.trail, *report.solution);
    report.relative_residual = verify(eq, a);
    report.solution = std::move(a);
    if (report.converged && report.relative_residual > opts.tol) {
      // Honest accounting: convergence is judged against the original
      // equation, not the reduced one.
      report.converged = report.relative_residual <= opts.tol;
    }
  }
  return report;
}

UniquenessReport uniqueness_probe(const Equation& eq, const SolveOptions& opts) {
  auto [reduced, trail] = reduce_fully(eq);
  const std::vector<ProductFactor> product = compile_word(reduced.word(), reduced.b());
  const double c = scalar_start_for_word(reduced.word(), reduced.b(), reduced.p(),
                                         opts.start_scale);
  const bool real_problem = problem_is_real(product, reduced.p());
  const Eigen::Index n = reduced.p().dim();

  SolveOptions inner = opts;
  inner.tol = opts.tol * 0.1;

  UniquenessReport probe;
  probe.starts = opts.starts;
  for (int s = 0; s < opts.starts; ++s) {
    const std::uint64_t seed =
        derive_seed(opts.seed, 0xA1100000ULL + static_cast<std::uint64_t>(s));
    const PDMatrix r = real_problem ? random_pd_real(n, seed, 10.0) : random_pd(n, seed, 10.0);
    const Matrix start = c * r.matrix();
    NewtonRun run = newton_from_point(product, reduced.p(), start, inner);
    if (!run.converged) continue;
    std::optional<PDMatrix> sol = try_pd(run.solution);
    if (!sol) continue;
    PDMatrix a = map_back(trail, *sol);
    probe.residuals.push_back(verify(eq, a));
    probe.solutions.push_back(std::move(a));
    ++probe.converged;
  }

  double dispersion = 0.0;
  for (std::size_t i = 0; i < probe.solutions.size(); ++i) {
    for (std::size_t j = i + 1; j < probe.solutions.size(); ++j) {
      const double num =
          (probe.solutions[i].matrix() - probe.solutions[j].matrix()).norm();
      const double den =
          std::max(probe.solutions[i].matrix().norm(), probe.solutions[j].matrix().norm());
      dispersion = std::max(dispersion, num / den);
    }
  }
  probe.dispersion = dispersion;
  return probe;
}

PDMatrix fixed_point_map(const HermitianMatrix& x, const Equation& eq, std::int64_t k) {
  if (k < 1) throw std::invalid_argument("fixed_point_map: k must be at least 1");
  if (x.dim() != eq.p().dim()) {
    throw std::invalid_argument("fixed_point_map: dimension mismatch");
  }
  const SpectralDecomposition xe = eig_hermitian(x);
  const double x_min = xe.eigenvalues(0);
  const double x_max = xe.eigenvalues(xe.eigenvalues.size() - 1);
  if (x_min < -1e-12 || x_max > 1.0 + 1e-12) {
    throw std::invalid_argument(
        "fixed_point_map: X must be positive semidefinite with norm at most 1");
  }

  const auto& fs = eq.word().factors();
  const Rational one(1);
  std::vector<Factor> inner = fs;
  if (fs.size() == 1) {
    if (fs[0].letter != Letter::A || fs[0].exponent < Rational(2)) {
      throw std::invalid_argument("fixed_point_map: word must factor as A . S . A");
    }
    inner[0].exponent = inner[0].exponent - Rational(2);
  } else {
    if (fs.front().letter != Letter::A || fs.back().letter != Letter::A ||
        fs.front().exponent < one || fs.back().exponent < one) {
      throw std::invalid_argument("fixed_point_map: word must factor as A . S . A");
    }
    inner.front().exponent = inner.front().exponent - one;
    inner.back().exponent = inner.back().exponent - one;
  }
  const WordExpr inner_word = normalize(std::move(inner));
  const WordShape sh = shape(inner_word);

  const double shift = 1.0 / static_cast<double>(k);
  const PDMatrix x_shift(
      Matrix(x.matrix() + shift * Matrix::Identity(x.dim(), x.dim())));
  const PDMatrix s_inner = evaluate_pd(inner_word, x_shift, eq.b());

  const double p_norm = spectral_norm(eq.p());
  const double p_inv_norm = 1.0 / eq.p().min_eigenvalue();
  const double b_norm = spectral_norm(eq.b());
  const double b_inv_norm = 1.0 / eq.b().min_eigenvalue();
  const double x_inv_norm = 1.0 / x_shift.min_eigenvalue();
  const double g = p_norm * std::sqrt(p_inv_norm) *
                   std::pow(b_norm, 0.5 * sh.s_b_neg.to_double()) *
                   std::pow(b_inv_norm, 0.5 * sh.s_b_pos.to_double()) *
                   std::pow(x_inv_norm, 0.5 * sh.s_a.to_double());

  const PDMatrix mean = geometric_mean(eq.p(), s_inner.inverse());
  return PDMatrix(Matrix(mean.matrix() / g));
}

double verify(const Equation& eq, const PDMatrix& a) {
  const Matrix value = evaluate(eq.word(), a, eq.b());
  return (value - eq.p().matrix()).norm() / eq.p().matrix().norm();
}

}  // namespace wordeq
