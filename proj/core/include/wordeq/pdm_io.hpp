#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "wordeq/matcore.hpp"

namespace wordeq {

/// Plain-text matrix format:
///   pdm1 <n> <real|complex>
/// followed by n rows of whitespace-separated entries (row-major), real and
/// imaginary parts interleaved in complex mode.  Lines starting with '#' are
/// comments and may appear anywhere.  Entries are written with 17
/// significant digits so doubles round-trip exactly.
enum class PdmMode { Real, Complex };

void write_pdm(std::ostream& out, const Matrix& m, PdmMode mode,
               std::string_view comment = {});
void write_pdm_file(const std::string& path, const Matrix& m, PdmMode mode,
                    std::string_view comment = {});

/// Reads any pdm1 matrix (no symmetry requirement; callers wanting Hermitian
/// or positive definite matrices validate afterwards).  Errors carry the
/// stream name and line number.
Matrix read_pdm(std::istream& in, std::string_view name = "<pdm>");
Matrix read_pdm_file(const std::string& path);

/// Chooses Real mode when every imaginary part is below 1e-14 relative to
/// the largest entry, Complex otherwise.
PdmMode suggest_mode(const Matrix& m);

}  // namespace wordeq
