#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "levelshift/ground_engines.hpp"
#include "levelshift/hermitian_operator.hpp"

namespace levelshift {

struct MatrixLoadOptions {
  /// Keep coordinate data sparse; otherwise everything is densified and
  /// dimensions above dense_limit are refused.
  bool sparse = false;
  Index dense_limit = kDefaultDenseLimit;
  double hermiticity_tol = 1e-12;
};

struct LoadedMatrix {
  HermitianOperator op;
  Index stored_entries = 0;
  /// SHA-256 of the file contents, hex.
  std::string digest;
};

/// MatrixMarket `matrix` objects in coordinate or array format, with real,
/// integer or complex fields and general, symmetric or hermitian symmetry.
/// For symmetric/hermitian files only the lower triangle is read.
LoadedMatrix parse_matrix_market(std::istream& in,
                                 const MatrixLoadOptions& options = {});
LoadedMatrix load_matrix(const std::filesystem::path& path,
                         const MatrixLoadOptions& options = {});

/// Writes `coordinate complex hermitian` with the lower triangle, values in
/// shortest round-trip form so that a reload is bit-exact.
void write_matrix_market(std::ostream& out, const HermitianOperator& op);
void save_matrix(const std::filesystem::path& path, const HermitianOperator& op);

}  // namespace levelshift
