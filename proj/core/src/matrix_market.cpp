#include "levelshift/matrix_market.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "levelshift/error.hpp"
#include "levelshift/runner.hpp"

namespace levelshift {
namespace {

enum class Format { coordinate, array };
enum class Field { real, integer, complex };
enum class Symmetry { general, symmetric, hermitian };

struct Header {
  Format format = Format::coordinate;
  Field field = Field::real;
  Symmetry symmetry = Symmetry::general;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::parse_error,
              "MatrixMarket line " + std::to_string(line) + ": " + what);
}

Header parse_header(const std::string& line) {
  std::istringstream in(line);
  std::string banner, object, format, field, symmetry;
  in >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") parse_fail(1, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix") parse_fail(1, "object '" + object + "' is not 'matrix'");
  Header h;
  format = lower(format);
  if (format == "coordinate") h.format = Format::coordinate;
  else if (format == "array") h.format = Format::array;
  else parse_fail(1, "unsupported format '" + format + "'");
  field = lower(field);
  if (field == "real") h.field = Field::real;
  else if (field == "integer") h.field = Field::integer;
  else if (field == "complex") h.field = Field::complex;
  else parse_fail(1, "unsupported field '" + field + "'");
  symmetry = lower(symmetry);
  if (symmetry == "general") h.symmetry = Symmetry::general;
  else if (symmetry == "symmetric") h.symmetry = Symmetry::symmetric;
  else if (symmetry == "hermitian") h.symmetry = Symmetry::hermitian;
  else parse_fail(1, "unsupported symmetry '" + symmetry + "'");
  if (h.symmetry == Symmetry::hermitian && h.field != Field::complex) {
    h.symmetry = Symmetry::symmetric;
  }
  return h;
}

double parse_number(const std::string& token, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) parse_fail(line, "bad number '" + token + "'");
  return v;
}

struct Entry {
  Index row;
  Index col;
  Complex value;
};

}  // namespace

LoadedMatrix parse_matrix_market(std::istream& in, const MatrixLoadOptions& options) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::istringstream lines(text);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(lines, line)) parse_fail(1, "empty input");
  ++line_no;
  const Header header = parse_header(line);

  auto next_data_line = [&](std::string& out) {
    while (std::getline(lines, out)) {
      ++line_no;
      const auto first = out.find_first_not_of(" \t\r");
      if (first == std::string::npos || out[first] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line(line)) parse_fail(line_no, "missing size line");
  long long rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size(line);
    size >> rows >> cols;
    if (header.format == Format::coordinate) size >> nnz;
    if (!size || rows <= 0 || cols <= 0 || nnz < 0) parse_fail(line_no, "bad size line");
  }
  if (rows != cols) {
    throw Error(ErrorCode::dimension_mismatch,
                "matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                    ", expected square");
  }
  const Index n = static_cast<Index>(rows);
  if (!options.sparse && n > options.dense_limit) {
    throw Error(ErrorCode::dense_limit_exceeded,
                "dimension " + std::to_string(n) + " exceeds dense_limit " +
                    std::to_string(options.dense_limit) + "; load with sparse enabled");
  }

  const bool symmetric_storage = header.symmetry != Symmetry::general;
  const int values_per_entry = header.field == Field::complex ? 2 : 1;

  auto read_value = [&](std::istringstream& tokens) {
    std::array<double, 2> parts{0.0, 0.0};
    for (int k = 0; k < values_per_entry; ++k) {
      std::string tok;
      if (!(tokens >> tok)) parse_fail(line_no, "missing value");
      parts[static_cast<std::size_t>(k)] = parse_number(tok, line_no);
    }
    return Complex(parts[0], parts[1]);
  };

  std::vector<Entry> entries;
  if (header.format == Format::coordinate) {
    entries.reserve(static_cast<std::size_t>(nnz));
    for (long long e = 0; e < nnz; ++e) {
      if (!next_data_line(line)) parse_fail(line_no, "expected " + std::to_string(nnz) + " entries");
      std::istringstream tokens(line);
      long long i = 0, j = 0;
      if (!(tokens >> i >> j)) parse_fail(line_no, "bad entry indices");
      if (i < 1 || j < 1 || i > rows || j > cols) parse_fail(line_no, "index out of range");
      if (symmetric_storage && j > i) parse_fail(line_no, "upper-triangle entry in a symmetric file");
      entries.push_back({static_cast<Index>(i - 1), static_cast<Index>(j - 1), read_value(tokens)});
    }
  } else {
    // Column-major; symmetric files list only the lower triangle.
    for (Index j = 0; j < n; ++j) {
      for (Index i = symmetric_storage ? j : 0; i < n; ++i) {
        if (!next_data_line(line)) parse_fail(line_no, "array data ends early");
        std::istringstream tokens(line);
        entries.push_back({i, j, read_value(tokens)});
      }
    }
  }
  if (next_data_line(line)) parse_fail(line_no, "trailing data");

  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(entries.size() * 2);
  for (const auto& e : entries) {
    triplets.emplace_back(e.row, e.col, e.value);
    if (symmetric_storage && e.row != e.col) {
      const Complex mirrored = header.symmetry == Symmetry::hermitian ? std::conj(e.value) : e.value;
      triplets.emplace_back(e.col, e.row, mirrored);
    }
    if (header.symmetry == Symmetry::hermitian && e.row == e.col &&
        std::abs(e.value.imag()) > options.hermiticity_tol * std::max(1.0, std::abs(e.value))) {
      throw Error(ErrorCode::hermiticity_violation,
                  "diagonal entry (" + std::to_string(e.row + 1) + ", " +
                      std::to_string(e.row + 1) + ") has an imaginary part");
    }
  }

  SparseMatrix sparse(n, n);
  sparse.setFromTriplets(triplets.begin(), triplets.end());
  sparse.makeCompressed();

  LoadedMatrix out{options.sparse
                       ? HermitianOperator::from_sparse(std::move(sparse), options.hermiticity_tol)
                       : HermitianOperator::from_dense(DenseMatrix(sparse), options.hermiticity_tol),
                   static_cast<Index>(entries.size()), sha256_hex(text)};
  return out;
}

LoadedMatrix load_matrix(const std::filesystem::path& path, const MatrixLoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open matrix file " + path.string());
  return parse_matrix_market(in, options);
}

namespace {

std::string shortest(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

void write_matrix_market(std::ostream& out, const HermitianOperator& op) {
  const SparseMatrix m = op.shifts().empty() && op.has_entries()
                             ? op.base_sparse()
                             : SparseMatrix(op.to_dense().sparseView());
  std::vector<Entry> lower_entries;
  for (Index r = 0; r < m.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (it.col() <= it.row() && it.value() != Complex(0.0, 0.0)) {
        lower_entries.push_back({it.row(), it.col(), it.value()});
      }
    }
  }
  std::sort(lower_entries.begin(), lower_entries.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  out << "%%MatrixMarket matrix coordinate complex hermitian\n";
  out << m.rows() << ' ' << m.cols() << ' ' << lower_entries.size() << '\n';
  for (const auto& e : lower_entries) {
    out << e.row + 1 << ' ' << e.col + 1 << ' ' << shortest(e.value.real()) << ' '
        << shortest(e.value.imag()) << '\n';
  }
}

void save_matrix(const std::filesystem::path& path, const HermitianOperator& op) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write matrix file " + path.string());
  write_matrix_market(out, op);
  if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

}  // namespace levelshift
