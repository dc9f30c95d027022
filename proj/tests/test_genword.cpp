#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/helpers.hpp"
#include "wordeq/errors.hpp"
#include "wordeq/genword.hpp"

using namespace wordeq;
using testutil::TestRng;

namespace {

double rel_err(const Matrix& got, const Matrix& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

double rotated_min_eig(const Matrix& c, double theta) {
  const Matrix rotated = std::polar(1.0, theta) * c;
  const Matrix re = 0.5 * (rotated + rotated.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> es(re);
  return es.eigenvalues()(0);
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("GenSymWord validates its description") {
  CHECK_NOTHROW(GenSymWord({Rational(2), Rational(1)}, 2));  // fold center
  CHECK_NOTHROW(GenSymWord({Rational(2), Rational(1)}, 1));  // central A power
  CHECK_THROWS_AS(GenSymWord({}, 0), std::invalid_argument);
  CHECK_THROWS_AS(GenSymWord({Rational(1)}, 2), std::invalid_argument);
  CHECK_THROWS_AS(GenSymWord({Rational(-1)}, 1), std::invalid_argument);
  CHECK_THROWS_AS(GenSymWord({Rational(0, 5), Rational(1)}, 2), std::invalid_argument);

  CHECK(GenSymWord({Rational(2), Rational(1)}, 2).center_is_fold());
  CHECK_FALSE(GenSymWord({Rational(2), Rational(1)}, 1).center_is_fold());
}

TEST_CASE("parse_gen_half reads alternating tokens") {
  const GenSymWord w1 = parse_gen_half("A^2 C1 A C2");
  CHECK(w1.a_exponents() == std::vector<Rational>{Rational(2), Rational(1)});
  CHECK(w1.coeff_count() == 2);
  CHECK(w1.center_is_fold());

  const GenSymWord w2 = parse_gen_half("A C1 A^(1/2)");
  CHECK(w2.a_exponents() == std::vector<Rational>{Rational(1), Rational(1, 2)});
  CHECK(w2.coeff_count() == 1);
  CHECK_FALSE(w2.center_is_fold());

  const GenSymWord w3 = parse_gen_half("A^3");
  CHECK(w3.coeff_count() == 0);
  CHECK_FALSE(w3.center_is_fold());
}

TEST_CASE("parse_gen_half rejects malformed halves") {
  CHECK_THROWS_AS(parse_gen_half("C1 A"), ParseError);
  CHECK_THROWS_AS(parse_gen_half("A C2"), ParseError);
  CHECK_THROWS_AS(parse_gen_half("A C1 C2"), ParseError);
  CHECK_THROWS_AS(parse_gen_half("A^(-1) C1"), ParseError);
  CHECK_THROWS_AS(parse_gen_half("A B"), ParseError);
  CHECK_THROWS_AS(parse_gen_half(""), ParseError);
}

TEST_CASE("print_gen_half round-trips") {
  const char* texts[] = {"A^2 C1 A C2", "A C1 A^(1/2)", "A^3", "A^(3/2) C1"};
  for (const char* text : texts) {
    const GenSymWord w = parse_gen_half(text);
    CHECK(print_gen_half(w) == text);
    const GenSymWord again = parse_gen_half(print_gen_half(w));
    CHECK(again.a_exponents() == w.a_exponents());
    CHECK(again.coeff_count() == w.coeff_count());
  }
}

TEST_CASE("evaluate_genword on a coefficient-free half is a plain power") {
  const PDMatrix a = random_pd(3, 61, 5.0);
  const PDMatrix w = evaluate_genword(parse_gen_half("A^3"), a, {});
  CHECK(rel_err(w.matrix(), matrix_power(a, 6.0).matrix()) < 1e-11);
}

TEST_CASE("evaluate_genword with C1 = B^(1/2) matches the plain word A B A") {
  const PDMatrix a = random_pd(3, 62, 5.0);
  const PDMatrix b = random_pd(3, 63, 5.0);
  const Matrix c1 = matrix_power(b, 0.5).matrix();
  const PDMatrix got = evaluate_genword(parse_gen_half("A C1"), a, {c1});
  const PDMatrix want = evaluate_pd(parse_word("A B A"), a, b);
  CHECK(rel_err(got.matrix(), want.matrix()) < 1e-10);
}

TEST_CASE("evaluate_genword matches the explicit half product") {
  TestRng rng(64);
  const char* halves[] = {"A C1 A^(1/2)", "A^2 C1 A C2", "A^(1/2) C1", "A C1 A C2 A"};
  for (int t = 0; t < 40; ++t) {
    const GenSymWord w = parse_gen_half(halves[t % 4]);
    const Eigen::Index n = 2 + t % 3;
    const PDMatrix a = random_pd(n, rng.raw(), 6.0);
    std::vector<Matrix> coeffs;
    for (int i = 0; i < w.coeff_count(); ++i) {
      Matrix c(n, n);
      for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index s = 0; s < n; ++s) {
          c(r, s) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        }
      }
      c += 5.0 * Matrix::Identity(n, n);  // keep it comfortably invertible
      coeffs.push_back(c);
    }

    Matrix half = Matrix::Identity(n, n);
    const auto& exps = w.a_exponents();
    for (std::size_t i = 0; i < exps.size(); ++i) {
      half = half * matrix_power(a, exps[i].to_double()).matrix();
      if (static_cast<int>(i) < w.coeff_count()) half = half * coeffs[i];
    }
    const Matrix want = half * half.adjoint();

    const PDMatrix got = evaluate_genword(w, a, coeffs);
    CHECK(rel_err(got.matrix(), want) < 1e-10);
    CHECK(got.min_eigenvalue() > 0.0);
  }
}

TEST_CASE("evaluate_genword scalar case is |half|^2") {
  Matrix a(1, 1), c(1, 1);
  a(0, 0) = 3.0;
  c(0, 0) = Complex(1.0, 2.0);
  const PDMatrix got = evaluate_genword(parse_gen_half("A^2 C1"), PDMatrix(a), {c});
  CHECK(got.matrix()(0, 0).real() == doctest::Approx(81.0 * 5.0).epsilon(1e-13));
}

TEST_CASE("evaluate_genword validates coefficients") {
  const PDMatrix a = random_pd(2, 65, 4.0);
  const GenSymWord w = parse_gen_half("A C1");
  CHECK_THROWS_AS(evaluate_genword(w, a, {}), std::invalid_argument);
  Matrix sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(evaluate_genword(w, a, {sing}), NumericalError);
  CHECK_THROWS_AS(evaluate_genword(w, a, {Matrix::Identity(3, 3)}), std::invalid_argument);
}

TEST_CASE("field of values certificate for definite and indefinite matrices") {
  Matrix pd = Matrix::Zero(2, 2);
  pd(0, 0) = 2.0;
  pd(1, 1) = 1.0;
  const FovCertificate cert = is_completely_invertible(pd);
  CHECK_FALSE(cert.contains_zero);
  CHECK(cert.margin == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cert.grid_points == 720);

  Matrix indef = Matrix::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  const FovCertificate bad = is_completely_invertible(indef);
  CHECK(bad.contains_zero);
  CHECK(bad.margin <= 0.0);
}

TEST_CASE("field of values certificate finds the optimal rotation") {
  // diag(1, i): margin sqrt(2)/2 at theta = 7 pi / 4.
  Matrix c = Matrix::Zero(2, 2);
  c(0, 0) = Complex(1.0, 0.0);
  c(1, 1) = Complex(0.0, 1.0);
  const FovCertificate cert = is_completely_invertible(c);
  CHECK_FALSE(cert.contains_zero);
  CHECK(cert.margin == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
  CHECK(cert.theta_star == doctest::Approx(7.0 * kPi / 4.0).epsilon(1e-6));
  // The reported margin is attained at the reported angle.
  CHECK(rotated_min_eig(c, cert.theta_star) == doctest::Approx(cert.margin).epsilon(1e-9));
}

TEST_CASE("field of values certificate on non-normal matrices") {
  // The nilpotent Jordan block has F = disk of radius 1/2 around 0.
  Matrix j = Matrix::Zero(2, 2);
  j(0, 1) = 1.0;
  const FovCertificate disk = is_completely_invertible(j);
  CHECK(disk.contains_zero);
  CHECK(disk.margin == doctest::Approx(-0.5).epsilon(1e-9));

  // Shifting by 0.6 moves the disk to distance 0.1 from the origin.
  const FovCertificate shifted =
      is_completely_invertible(Matrix(j + 0.6 * Matrix::Identity(2, 2)));
  CHECK_FALSE(shifted.contains_zero);
  CHECK(shifted.margin == doctest::Approx(0.1).epsilon(1e-8));
}

TEST_CASE("field of values certificate agrees with the hull oracle on normal input") {
  TestRng rng(66);
  int checked = 0;
  while (checked < 30) {
    const Eigen::Index n = 2 + checked % 4;
    std::vector<Complex> eigs;
    Eigen::VectorXcd diag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      eigs.push_back(z);
      diag(i) = z;
    }
    const double oracle = testutil::hull_signed_distance(eigs);
    if (std::abs(oracle) < 1e-7) continue;  // skip boundary-ambiguous draws

    // Conjugate by a random unitary to hide the diagonal structure.
    const PDMatrix q_src = random_pd(n, rng.raw(), 4.0);
    const Matrix u = q_src.decomposition().unitary;
    const Matrix c = u * diag.asDiagonal() * u.adjoint();

    const FovCertificate cert = is_completely_invertible(c);
    CHECK(cert.contains_zero == (oracle <= 0.0));
    if (!cert.contains_zero) {
      CHECK(cert.margin == doctest::Approx(oracle).epsilon(1e-6));
    }
    ++checked;
  }
}

TEST_CASE("solve_genword with C1 = B matches the plain Newton solve") {
  const Eigen::Index n = 3;
  const PDMatrix a_true = random_pd(n, 67, 5.0);
  const PDMatrix b = random_pd(n, 68, 5.0);
  const GenSymWord w = parse_gen_half("A C1 A");
  const std::vector<Matrix> coeffs = {b.matrix()};
  const PDMatrix p = evaluate_genword(w, a_true, coeffs);

  const GenSolveReport gen = solve_genword(w, coeffs, p, {});
  REQUIRE(gen.report.converged);
  CHECK(gen.report.relative_residual <= 1e-9);
  REQUIRE(gen.certificates.size() == 1);

  const SolveReport plain = solve(Equation(parse_word("A B A^2 B A"), b, p), {});
  REQUIRE(plain.converged);
  CHECK(rel_err(gen.report.solution->matrix(), plain.solution->matrix()) < 1e-7);
}

TEST_CASE("solve_genword rescales fractional exponents and maps back") {
  const Eigen::Index n = 2;
  const PDMatrix a_true = random_pd(n, 69, 4.0);
  const PDMatrix b = random_pd(n, 70, 4.0);
  const GenSymWord w = parse_gen_half("A^(1/2) C1");
  const std::vector<Matrix> coeffs = {matrix_power(b, 0.5).matrix()};
  const PDMatrix p = evaluate_genword(w, a_true, coeffs);

  const GenSolveReport gen = solve_genword(w, coeffs, p, {});
  REQUIRE(gen.report.converged);
  CHECK(gen.report.relative_residual <= 1e-9);
  REQUIRE(gen.report.trail.steps.size() == 1);
  CHECK(gen.report.trail.steps[0].kind == ReductionStep::Kind::RescaleA);
  CHECK(gen.report.trail.steps[0].amount == Rational(2));

  // W = A^(1/2) B A^(1/2), whose unique solution is recovered exactly by the
  // plain closed-form pipeline.
  const SolveReport plain = solve(Equation(parse_word("A^(1/2) B A^(1/2)"), b, p), {});
  REQUIRE(plain.converged);
  CHECK(rel_err(gen.report.solution->matrix(), plain.solution->matrix()) < 1e-6);
}

TEST_CASE("solve_genword works when 0 lies inside a coefficient's field of values") {
  const Eigen::Index n = 2;
  const PDMatrix a_true = random_pd(n, 71, 4.0);
  Matrix c1(n, n);
  c1 << Complex(1, 0), Complex(4, 0), Complex(0, 0), Complex(-1, 0);
  const GenSymWord w = parse_gen_half("A C1 A");
  const PDMatrix p = evaluate_genword(w, a_true, {c1});

  const GenSolveReport gen = solve_genword(w, {c1}, p, {});
  REQUIRE(gen.certificates.size() == 1);
  CHECK(gen.certificates[0].contains_zero);  // warned, not blocked
  REQUIRE(gen.report.converged);
  CHECK(gen.report.relative_residual <= 1e-8);
}
