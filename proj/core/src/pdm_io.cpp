#include "wordeq/pdm_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace wordeq {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

[[noreturn]] void fail(std::string_view name, std::size_t line, const std::string& what) {
  throw Error(std::string(name) + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

PdmMode suggest_mode(const Matrix& m) {
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return (m.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale) ? PdmMode::Real
                                                           : PdmMode::Complex;
}

void write_pdm(std::ostream& out, const Matrix& m, PdmMode mode, std::string_view comment) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("write_pdm: matrix must be square and non-empty");
  }
  if (mode == PdmMode::Real) {
    const double scale = 1.0 + m.cwiseAbs().maxCoeff();
    if (m.imag().cwiseAbs().maxCoeff() > 1e-14 * scale) {
      throw std::invalid_argument(
          "write_pdm: matrix has significant imaginary parts; use complex mode");
    }
  }
  const Eigen::Index n = m.rows();
  out << "pdm1 " << n << ' ' << (mode == PdmMode::Real ? "real" : "complex") << '\n';
  if (!comment.empty()) out << "# " << comment << '\n';
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j > 0) out << ' ';
      if (mode == PdmMode::Real) {
        out << fmt(m(i, j).real());
      } else {
        out << fmt(m(i, j).real()) << ' ' << fmt(m(i, j).imag());
      }
    }
    out << '\n';
  }
  if (!out) throw Error("write_pdm: stream write failed");
}

void write_pdm_file(const std::string& path, const Matrix& m, PdmMode mode,
                    std::string_view comment) {
  std::ofstream out(path);
  if (!out) throw Error("write_pdm: cannot open '" + path + "' for writing");
  write_pdm(out, m, mode, comment);
}

Matrix read_pdm(std::istream& in, std::string_view name) {
  std::string line;
  std::size_t line_no = 0;

  // Header: first non-comment, non-blank line.
  Eigen::Index n = 0;
  bool complex_mode = false;
  for (;;) {
    if (!std::getline(in, line)) fail(name, line_no, "missing 'pdm1' header");
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag != "pdm1") fail(name, line_no, "expected 'pdm1' header, got '" + tag + "'");
    long long dim = 0;
    std::string mode;
    if (!(ls >> dim >> mode)) fail(name, line_no, "header must read 'pdm1 <n> <real|complex>'");
    if (dim < 1 || dim > 10000) fail(name, line_no, "unreasonable dimension " + std::to_string(dim));
    if (mode == "real") {
      complex_mode = false;
    } else if (mode == "complex") {
      complex_mode = true;
    } else {
      fail(name, line_no, "mode must be 'real' or 'complex', got '" + mode + "'");
    }
    std::string extra;
    if (ls >> extra) fail(name, line_no, "unexpected token '" + extra + "' after header");
    n = static_cast<Eigen::Index>(dim);
    break;
  }

  const std::size_t needed = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) *
                             (complex_mode ? 2 : 1);
  std::vector<double> values;
  values.reserve(needed);
  while (values.size() < needed) {
    if (!std::getline(in, line)) {
      fail(name, line_no,
           "unexpected end of input: got " + std::to_string(values.size()) + " of " +
               std::to_string(needed) + " numbers");
    }
    ++line_no;
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) {
      if (token[0] == '#') break;  // trailing comment
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        fail(name, line_no, "expected a number, got '" + token + "'");
      }
      if (used != token.size()) fail(name, line_no, "malformed number '" + token + "'");
      if (values.size() == needed) fail(name, line_no, "more numbers than the header announces");
      values.push_back(v);
    }
  }

  // Anything but comments/blank lines after the data is an error.
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string token;
    if (ls >> token && token[0] != '#') {
      fail(name, line_no, "trailing content '" + token + "' after matrix data");
    }
  }

  Matrix m(n, n);
  std::size_t idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (complex_mode) {
        const double re = values[idx++];
        const double im = values[idx++];
        m(i, j) = Complex(re, im);
      } else {
        m(i, j) = Complex(values[idx++], 0.0);
      }
    }
  }
  return m;
}

Matrix read_pdm_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_pdm: cannot open '" + path + "'");
  return read_pdm(in, path);
}

}  // namespace wordeq
