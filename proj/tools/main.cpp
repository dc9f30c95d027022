#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wordeq/explorer.hpp"
#include "wordeq/genword.hpp"
#include "wordeq/pdm_io.hpp"
#include "wordeq/reducer.hpp"
#include "wordeq/solver.hpp"
#include "wordeq/wordlang.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace wordeq;

struct GlobalOpts {
  std::string output = "text";
  double tol = 1e-10;
  int max_iters = 100;
  int starts = 8;
  std::uint64_t seed = 0;
  std::string out_path;

  bool json_mode() const { return output == "json"; }

  SolveOptions solver_options() const {
    SolveOptions opts;
    opts.tol = tol;
    opts.max_iters = max_iters;
    opts.starts = starts;
    opts.seed = seed;
    return opts;
  }
};

Matrix load_matrix(const std::string& path, const std::string& flag) {
  try {
    return read_pdm_file(path);
  } catch (const std::exception& e) {
    throw Error(flag + ": " + e.what());
  }
}

PDMatrix load_pd(const std::string& path, const std::string& flag) {
  try {
    return PDMatrix(read_pdm_file(path));
  } catch (const std::exception& e) {
    throw Error(flag + " ('" + path + "'): " + e.what());
  }
}

// B may be omitted exactly when the word never mentions it.
PDMatrix load_b_or_identity(const std::string& path, const WordExpr& word, Eigen::Index n) {
  bool uses_b = false;
  for (const Factor& f : word.factors()) uses_b |= (f.letter == Letter::B);
  if (path.empty()) {
    if (uses_b) throw Error("--B: required because the word contains the letter B");
    return PDMatrix::identity(n);
  }
  return load_pd(path, "--B");
}

json matrix_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    entries.push_back(std::move(row));
  }
  return json{{"n", m.rows()}, {"entries", std::move(entries)}};
}

json trail_json(const ReductionTrail& trail) {
  json steps = json::array();
  for (const ReductionStep& step : trail.steps) {
    steps.push_back({{"kind", to_string(step.kind)}, {"amount", step.amount.to_string()}});
  }
  return steps;
}

json report_json(const SolveReport& report) {
  json j;
  j["method"] = to_string(report.method);
  j["converged"] = report.converged;
  j["relative_residual"] = report.relative_residual;
  j["iterations"] = report.iterations;
  j["starts_used"] = report.starts_used;
  j["dispersion"] = report.dispersion;
  j["residual_history"] = report.residual_history;
  j["trail"] = trail_json(report.trail);
  j["solution"] = report.solution ? matrix_json(report.solution->matrix()) : json(nullptr);
  return j;
}

json certificate_json(const FovCertificate& cert) {
  return json{{"contains_zero", cert.contains_zero},
              {"margin", cert.margin},
              {"theta_star", cert.theta_star},
              {"grid_points", cert.grid_points}};
}

void emit_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void print_matrix_text(const Matrix& m) { write_pdm(std::cout, m, suggest_mode(m)); }

void maybe_write_out(const GlobalOpts& g, const Matrix& m) {
  if (g.out_path.empty()) return;
  write_pdm_file(g.out_path, m, suggest_mode(m));
}

void print_report_text(const SolveReport& report) {
  std::cout << "method: " << to_string(report.method) << '\n'
            << "converged: " << (report.converged ? "yes" : "no") << '\n'
            << "relative residual: " << report.relative_residual << '\n'
            << "iterations: " << report.iterations << '\n'
            << "starts used: " << report.starts_used << '\n';
  if (!report.trail.steps.empty()) {
    std::cout << "trail:";
    for (const ReductionStep& step : report.trail.steps) {
      std::cout << ' ' << to_string(step.kind) << '(' << step.amount.to_string() << ')';
    }
    std::cout << '\n';
  }
  if (report.solution) {
    std::cout << "solution:\n";
    print_matrix_text(report.solution->matrix());
  }
}

int run_solve(const GlobalOpts& g, const std::string& word_text, const std::string& b_path,
              const std::string& p_path) {
  const WordExpr word = parse_word(word_text);
  const PDMatrix p = load_pd(p_path, "--P");
  const PDMatrix b = load_b_or_identity(b_path, word, p.dim());
  const Equation eq(word, b, p);

  const SolveReport report = solve(eq, g.solver_options());
  if (g.json_mode()) {
    json j;
    j["word"] = print_word(word);
    j.update(report_json(report));
    emit_json(j);
  } else {
    std::cout << "word: " << print_word(word) << '\n';
    print_report_text(report);
  }
  if (report.solution) maybe_write_out(g, report.solution->matrix());
  return report.converged ? 0 : 2;
}

int run_eval(const GlobalOpts& g, const std::string& word_text, const std::string& a_path,
             const std::string& b_path) {
  const WordExpr word = parse_word(word_text);
  const PDMatrix a = load_pd(a_path, "--A");
  const PDMatrix b = load_b_or_identity(b_path, word, a.dim());
  const Matrix value = evaluate(word, a, b);
  const Complex trace = value.trace();

  if (g.json_mode()) {
    json j;
    j["word"] = print_word(word);
    j["symmetric"] = shape(word).symmetric;
    j["trace"] = {trace.real(), trace.imag()};
    j["value"] = matrix_json(value);
    emit_json(j);
  } else {
    std::cout << "word: " << print_word(word) << '\n'
              << "trace: " << trace.real() << (trace.imag() < 0 ? " - " : " + ")
              << std::abs(trace.imag()) << "i\n"
              << "value:\n";
    print_matrix_text(value);
  }
  maybe_write_out(g, value);
  return 0;
}

int run_check(const GlobalOpts& g, const std::string& word_text) {
  const WordExpr word = parse_word(word_text);
  const WordShape sh = shape(word);
  const PowerDecomposition pd = detect_power(word);

  if (g.json_mode()) {
    json j;
    j["word"] = word_text;
    j["normalized"] = print_word(word);
    j["symmetric"] = sh.symmetric;
    j["a_positive"] = sh.a_positive;
    j["class"] = sh.class_number;
    j["s_a"] = sh.s_a.to_string();
    j["s_b_pos"] = sh.s_b_pos.to_string();
    j["s_b_neg"] = sh.s_b_neg.to_string();
    j["power"] = {{"base", print_word(pd.base)}, {"k", pd.k}};
    emit_json(j);
  } else {
    std::cout << "normalized: " << print_word(word) << '\n'
              << "symmetric: " << (sh.symmetric ? "yes" : "no") << '\n'
              << "a-positive: " << (sh.a_positive ? "yes" : "no") << '\n'
              << "class: " << sh.class_number << '\n'
              << "exponent sums: A " << sh.s_a.to_string() << ", B+ "
              << sh.s_b_pos.to_string() << ", B- " << sh.s_b_neg.to_string() << '\n'
              << "power: (" << print_word(pd.base) << ")^" << pd.k << '\n';
  }
  return 0;
}

int run_reduce(const GlobalOpts& g, const std::string& word_text, const std::string& b_path,
               const std::string& p_path) {
  const WordExpr word = parse_word(word_text);
  const PDMatrix p = load_pd(p_path, "--P");
  const PDMatrix b = load_b_or_identity(b_path, word, p.dim());
  const Equation eq(word, b, p);
  const auto [reduced, trail] = reduce_fully(eq);

  if (g.json_mode()) {
    json j;
    j["original"] = print_word(word);
    j["reduced"] = print_word(reduced.word());
    j["steps"] = trail_json(trail);
    j["p_reduced"] = matrix_json(reduced.p().matrix());
    emit_json(j);
  } else {
    std::cout << "original: " << print_word(word) << '\n'
              << "reduced: " << print_word(reduced.word()) << '\n';
    std::cout << "steps:";
    if (trail.steps.empty()) std::cout << " (none)";
    for (const ReductionStep& step : trail.steps) {
      std::cout << ' ' << to_string(step.kind) << '(' << step.amount.to_string() << ')';
    }
    std::cout << '\n' << "reduced P:\n";
    print_matrix_text(reduced.p().matrix());
  }
  maybe_write_out(g, reduced.p().matrix());
  return 0;
}

int run_geomean(const GlobalOpts& g, const std::string& c_path, const std::string& d_path) {
  const PDMatrix c = load_pd(c_path, "--C");
  const PDMatrix d = load_pd(d_path, "--D");
  const PDMatrix mean = geometric_mean(c, d);

  if (g.json_mode()) {
    emit_json(json{{"mean", matrix_json(mean.matrix())}});
  } else {
    print_matrix_text(mean.matrix());
  }
  maybe_write_out(g, mean.matrix());
  return 0;
}

int run_fov(const GlobalOpts& g, const std::string& c_path) {
  const Matrix c = load_matrix(c_path, "--C");
  const FovCertificate cert = is_completely_invertible(c);

  if (g.json_mode()) {
    emit_json(certificate_json(cert));
  } else {
    std::cout << "contains zero: " << (cert.contains_zero ? "yes" : "no") << '\n'
              << "margin: " << cert.margin << '\n'
              << "theta*: " << cert.theta_star << '\n'
              << "grid points: " << cert.grid_points << '\n'
              << (cert.contains_zero
                      ? "not completely invertible (0 lies in the field of values)\n"
                      : "completely invertible (0 is outside the field of values)\n");
  }
  return 0;
}

int run_trace_search(const GlobalOpts& g, const std::string& word_text, Eigen::Index n,
                     std::int64_t trials, double cond_min, double cond_max) {
  const WordExpr word = parse_word(word_text);
  const TraceSearchReport report =
      trace_search(word, n, trials, g.seed, cond_min, cond_max);

  if (g.json_mode()) {
    json j;
    j["word"] = print_word(word);
    j["classification"] = to_string(report.classification);
    j["dimension"] = report.dimension;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["min_trace"] = report.min_trace;
    j["witness_a"] = report.witness_a ? matrix_json(report.witness_a->matrix()) : json(nullptr);
    j["witness_b"] = report.witness_b ? matrix_json(report.witness_b->matrix()) : json(nullptr);
    emit_json(j);
  } else {
    std::cout << "word: " << print_word(word) << '\n'
              << "classification: " << to_string(report.classification) << '\n'
              << "trials: " << report.trials << " at n = " << report.dimension << '\n'
              << "min trace: " << report.min_trace << '\n';
    if (report.witness_a) {
      std::cout << "witness A:\n";
      print_matrix_text(report.witness_a->matrix());
      std::cout << "witness B:\n";
      print_matrix_text(report.witness_b->matrix());
    }
  }
  return 0;
}

int run_gen_solve(const GlobalOpts& g, const std::string& half_text,
                  const std::vector<std::string>& coeff_paths, const std::string& p_path) {
  const GenSymWord word = parse_gen_half(half_text);
  std::vector<Matrix> coeffs;
  coeffs.reserve(coeff_paths.size());
  for (std::size_t i = 0; i < coeff_paths.size(); ++i) {
    coeffs.push_back(load_matrix(coeff_paths[i], "--coeff (C" + std::to_string(i + 1) + ")"));
  }
  const PDMatrix p = load_pd(p_path, "--P");

  const GenSolveReport result = solve_genword(word, coeffs, p, g.solver_options());

  if (g.json_mode()) {
    json j;
    j["half"] = print_gen_half(word);
    j["center"] = word.center_is_fold() ? "fold" : "a_power";
    json certs = json::array();
    for (const FovCertificate& cert : result.certificates) certs.push_back(certificate_json(cert));
    j["certificates"] = std::move(certs);
    j.update(report_json(result.report));
    emit_json(j);
  } else {
    std::cout << "half: " << print_gen_half(word) << '\n';
    for (std::size_t i = 0; i < result.certificates.size(); ++i) {
      const FovCertificate& cert = result.certificates[i];
      std::cout << "C" << (i + 1) << ": margin " << cert.margin
                << (cert.contains_zero ? " (warning: 0 lies in the field of values)" : "")
                << '\n';
    }
    print_report_text(result.report);
  }
  if (result.report.solution) maybe_write_out(g, result.report.solution->matrix());
  return result.report.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric word equations in two positive definite letters"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--output", g.output, "Output mode: text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--tol", g.tol, "Relative residual tolerance")->capture_default_str();
  app.add_option("--max-iters", g.max_iters, "Newton iterations per start")
      ->capture_default_str();
  app.add_option("--starts", g.starts, "Multi-start budget")->capture_default_str();
  app.add_option("--seed", g.seed, "Random stream seed (never wall clock)")
      ->capture_default_str();
  app.add_option("--out", g.out_path, "Write the resulting matrix to this pdm file");

  std::string word_text, a_path, b_path, p_path, c_path, d_path, half_text;
  std::vector<std::string> coeff_paths;
  Eigen::Index ts_n = 3;
  std::int64_t ts_trials = 1000;
  double cond_min = 1.0, cond_max = 100.0;

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve S(A, B) = P for A");
  solve_cmd->add_option("--word", word_text, "Symmetric word, e.g. 'A B A'")->required();
  solve_cmd->add_option("--B", b_path, "pdm file for B (optional when the word has no B)");
  solve_cmd->add_option("--P", p_path, "pdm file for P")->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a word at given letters");
  eval_cmd->add_option("--word", word_text, "Word to evaluate")->required();
  eval_cmd->add_option("--A", a_path, "pdm file for A")->required();
  eval_cmd->add_option("--B", b_path, "pdm file for B (optional when the word has no B)");

  CLI::App* check_cmd = app.add_subcommand("check", "Parse a word and report its shape");
  check_cmd->add_option("--word", word_text, "Word to inspect")->required();

  CLI::App* reduce_cmd =
      app.add_subcommand("reduce", "Reduce an equation to its simplest equivalent form");
  reduce_cmd->add_option("--word", word_text, "Symmetric word")->required();
  reduce_cmd->add_option("--B", b_path, "pdm file for B (optional when the word has no B)");
  reduce_cmd->add_option("--P", p_path, "pdm file for P")->required();

  CLI::App* geomean_cmd = app.add_subcommand("geomean", "Geometric mean of two PD matrices");
  geomean_cmd->add_option("--C", c_path, "pdm file")->required();
  geomean_cmd->add_option("--D", d_path, "pdm file")->required();

  CLI::App* fov_cmd =
      app.add_subcommand("fov", "Field-of-values zero-exclusion certificate");
  fov_cmd->add_option("--C", c_path, "pdm file (any square matrix)")->required();

  CLI::App* trace_cmd = app.add_subcommand(
      "trace-search", "Random search for the minimum trace of a word");
  trace_cmd->add_option("--word", word_text, "Word with positive integer exponents")
      ->required();
  trace_cmd->add_option("--n", ts_n, "Matrix dimension")->capture_default_str();
  trace_cmd->add_option("--trials", ts_trials, "Sample count")->capture_default_str();
  trace_cmd->add_option("--cond-min", cond_min, "Condition number range low end")
      ->capture_default_str();
  trace_cmd->add_option("--cond-max", cond_max, "Condition number range high end")
      ->capture_default_str();

  CLI::App* gen_cmd = app.add_subcommand(
      "gen-solve", "Solve a generalized symmetric word equation W(A; C1..Cm) = P");
  gen_cmd->add_option("--half", half_text, "Left half, e.g. 'A^2 C1 A C2'")->required();
  gen_cmd->add_option("--coeff", coeff_paths, "pdm file for the next coefficient (repeat)");
  gen_cmd->add_option("--P", p_path, "pdm file for P")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(solve_cmd)) return run_solve(g, word_text, b_path, p_path);
    if (app.got_subcommand(eval_cmd)) return run_eval(g, word_text, a_path, b_path);
    if (app.got_subcommand(check_cmd)) return run_check(g, word_text);
    if (app.got_subcommand(reduce_cmd)) return run_reduce(g, word_text, b_path, p_path);
    if (app.got_subcommand(geomean_cmd)) return run_geomean(g, c_path, d_path);
    if (app.got_subcommand(fov_cmd)) return run_fov(g, c_path);
    if (app.got_subcommand(trace_cmd)) {
      return run_trace_search(g, word_text, ts_n, ts_trials, cond_min, cond_max);
    }
    if (app.got_subcommand(gen_cmd)) return run_gen_solve(g, half_text, coeff_paths, p_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
