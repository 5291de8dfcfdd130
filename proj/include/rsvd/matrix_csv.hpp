#ifndef RSVD_MATRIX_CSV_HPP
#define RSVD_MATRIX_CSV_HPP

#include <iosfwd>
#include <string>

#include "rsvd/dense_matrix.hpp"

namespace rsvd {

/// Reads a dense matrix from comma-separated reals, one row per line, no
/// header. Blank lines and lines starting with '#' are skipped. Throws
/// ParseError with line/column context on malformed content.
DenseMatrix read_matrix_csv(const std::string& path);
DenseMatrix read_matrix_csv(std::istream& in, const std::string& name);

/// Writes a matrix in the same format with full double precision. When
/// `comment` is nonempty it is emitted first as a '#' line.
void write_matrix_csv(const DenseMatrix& a, const std::string& path,
                      const std::string& comment = "");
void write_matrix_csv(const DenseMatrix& a, std::ostream& out,
                      const std::string& comment = "");

/// A headered numeric CSV, as produced by the report artifacts.
struct NamedCsv {
  std::vector<std::string> columns;
  DenseMatrix values;
};

/// Reads a numeric CSV whose first non-comment line names the columns.
NamedCsv read_named_csv(const std::string& path);

}  // namespace rsvd

#endif
