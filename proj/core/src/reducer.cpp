#include "wordeq/reducer.hpp"

#include <numeric>

namespace wordeq {

Equation::Equation(WordExpr word, PDMatrix b, PDMatrix p)
    : word_(std::move(word)), b_(std::move(b)), p_(std::move(p)) {
  const WordShape sh = shape(word_);
  if (!sh.symmetric || !sh.a_positive) {
    throw std::invalid_argument(
        "Equation: word must be symmetric (equal to its reversal) with every A "
        "exponent positive");
  }
  bool has_a = false;
  for (const Factor& f : word_.factors()) has_a |= (f.letter == Letter::A);
  if (!has_a) {
    throw std::invalid_argument("Equation: word must contain the unknown letter A");
  }
  if (b_.dim() != p_.dim()) {
    throw std::invalid_argument("Equation: B and P dimensions differ");
  }
}

const char* to_string(ReductionStep::Kind kind) {
  switch (kind) {
    case ReductionStep::Kind::StripOuterB: return "StripOuterB";
    case ReductionStep::Kind::RootReduce: return "RootReduce";
    case ReductionStep::Kind::RescaleA: return "RescaleA";
  }
  return "?";
}

std::optional<std::pair<Equation, ReductionStep>> strip_outer_b(const Equation& eq) {
  const auto& fs = eq.word().factors();
  if (fs.size() < 3) return std::nullopt;
  if (fs.front().letter != Letter::B || fs.back().letter != Letter::B) return std::nullopt;
  const Rational s = fs.front().exponent;  // symmetry forces fs.back() == s
  std::vector<Factor> inner(fs.begin() + 1, fs.end() - 1);
  const Matrix b_neg_s =
      power_from_decomposition(eq.b().decomposition(), (-s).to_double());
  PDMatrix new_p(Matrix(b_neg_s * eq.p().matrix() * b_neg_s));
  Equation reduced(normalize(std::move(inner)), eq.b(), std::move(new_p));
  return std::make_pair(std::move(reduced),
                        ReductionStep{ReductionStep::Kind::StripOuterB, s});
}

std::optional<std::pair<Equation, ReductionStep>> root_reduce(const Equation& eq) {
  const PowerDecomposition pd = detect_power(eq.word());
  if (pd.k < 2) return std::nullopt;
  if (!shape(pd.base).symmetric) return std::nullopt;
  PDMatrix new_p = matrix_power(eq.p(), 1.0 / static_cast<double>(pd.k));
  Equation reduced(pd.base, eq.b(), std::move(new_p));
  return std::make_pair(std::move(reduced),
                        ReductionStep{ReductionStep::Kind::RootReduce, Rational(pd.k)});
}

std::optional<std::pair<Equation, ReductionStep>> rescale_a_to_integer(const Equation& eq) {
  std::int64_t lcm = 1;
  for (const Factor& f : eq.word().factors()) {
    if (f.letter == Letter::A) lcm = std::lcm(lcm, f.exponent.denominator());
  }
  if (lcm == 1) return std::nullopt;
  std::vector<Factor> scaled;
  scaled.reserve(eq.word().size());
  for (const Factor& f : eq.word().factors()) {
    if (f.letter == Letter::A) {
      scaled.push_back(Factor{f.letter, f.exponent * Rational(lcm)});
    } else {
      scaled.push_back(f);
    }
  }
  Equation reduced(normalize(std::move(scaled)), eq.b(), eq.p());
  return std::make_pair(std::move(reduced),
                        ReductionStep{ReductionStep::Kind::RescaleA, Rational(lcm)});
}

std::pair<Equation, ReductionTrail> reduce_fully(const Equation& eq) {
  Equation current = eq;
  ReductionTrail trail;
  for (;;) {
    if (auto step = strip_outer_b(current)) {
      current = std::move(step->first);
      trail.steps.push_back(step->second);
      continue;
    }
    if (auto step = root_reduce(current)) {
      current = std::move(step->first);
      trail.steps.push_back(step->second);
      continue;
    }
    if (auto step = rescale_a_to_integer(current)) {
      current = std::move(step->first);
      trail.steps.push_back(step->second);
      continue;
    }
    break;
  }
  return {std::move(current), std::move(trail)};
}

PDMatrix map_back(const ReductionTrail& trail, const PDMatrix& reduced_solution) {
  PDMatrix a = reduced_solution;
  for (auto it = trail.steps.rbegin(); it != trail.steps.rend(); ++it) {
    if (it->kind == ReductionStep::Kind::RescaleA) {
      a = matrix_power(a, it->amount.to_double());
    }
  }
  return a;
}

}  // namespace wordeq
