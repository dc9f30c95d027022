#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wordeq/matcore.hpp"
#include "wordeq/wordlang.hpp"

namespace wordeq {

/// Trace-positivity classes for words with positive integer exponents.
/// Symmetric words and juxtapositions of two symmetric words are exactly the
/// classes conjectured (and in small cases known) to have positive trace at
/// every pair of positive definite letters.
enum class WordClassTag { Symmetric, TwoSymmetricProduct, Neither };

const char* to_string(WordClassTag tag);

struct WordSplit {
  WordExpr left;
  WordExpr right;
};

struct WordClass {
  WordClassTag tag;
  std::vector<WordSplit> splits;  // every u.v decomposition into two
                                  // nonempty symmetric words, including
                                  // splits interior to a power block
};

/// Classifies a word with positive integer exponents.  Splits are searched
/// at every letter boundary of the expanded word, so A^2 B A B splits as
/// (A) (A B A B)-style decompositions are found even inside exponents.
WordClass classify_word(const WordExpr& w);

struct TraceSearchReport {
  WordExpr word;
  WordClassTag classification = WordClassTag::Neither;
  std::int64_t trials = 0;
  Eigen::Index dimension = 0;
  std::uint64_t seed = 0;
  double min_trace = 0.0;
  std::optional<PDMatrix> witness_a;  // attain min_trace
  std::optional<PDMatrix> witness_b;
};

/// Monte-Carlo minimum of tr S(A, B) over seeded random real positive
/// definite pairs, with condition numbers sampled log-uniformly from
/// [cond_min, cond_max].  Deterministic for fixed (word, n, trials, seed).
TraceSearchReport trace_search(const WordExpr& w, Eigen::Index n, std::int64_t trials,
                               std::uint64_t seed, double cond_min, double cond_max);

struct CounterexampleReport {
  WordExpr word;  // A^(-1) B A^2 B A^(-1)
  std::int64_t samples = 0;
  std::uint64_t seed = 0;
  double sampled_min_residual = 0.0;   // best || S(A,B) - I || / || I || sampled
  double polished_min_residual = 0.0;  // after derivative-free descent
  std::optional<PDMatrix> best_a;
};

/// Demonstrates that the symmetric equation A^{-1} B A^2 B A^{-1} = I (a
/// word with a negative exponent) resists solution for generic B: random
/// sampling followed by a compass-search polish in the Hermitian logarithm
/// of A leaves the residual bounded away from zero.  Evidence, not proof.
/// Rejects B within relative distance 1e-6 of the identity, for which
/// solutions do exist.
CounterexampleReport counterexample_demo(const PDMatrix& b, std::int64_t samples,
                                         std::uint64_t seed);

}  // namespace wordeq
