#include "rsvd/matrix_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rsvd/errors.hpp"

namespace rsvd {

namespace {

double parse_cell(std::string_view cell, const std::string& name,
                  std::size_t line_no, std::size_t col_no) {
  // Trim surrounding spaces; the numeric body itself must parse fully.
  std::size_t begin = 0, end = cell.size();
  while (begin < end && (cell[begin] == ' ' || cell[begin] == '\t')) ++begin;
  while (end > begin && (cell[end - 1] == ' ' || cell[end - 1] == '\t' ||
                         cell[end - 1] == '\r')) {
    --end;
  }
  const std::string_view body = cell.substr(begin, end - begin);
  double value = 0.0;
  const auto* first = body.data();
  const auto* last = body.data() + body.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || body.empty()) {
    throw ParseError(name + ":" + std::to_string(line_no) + ": column " +
                     std::to_string(col_no) + ": not a number: '" +
                     std::string(body) + "'");
  }
  return value;
}

}  // namespace

DenseMatrix read_matrix_csv(std::istream& in, const std::string& name) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    std::size_t pos = 0;
    std::size_t col_no = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::size_t len =
          (comma == std::string::npos ? line.size() : comma) - pos;
      ++col_no;
      data.push_back(
          parse_cell(std::string_view(line).substr(pos, len), name, line_no,
                     col_no));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (rows == 0) {
      cols = col_no;
    } else if (col_no != cols) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " columns, found " +
                       std::to_string(col_no));
    }
    ++rows;
  }
  if (rows == 0) {
    throw ParseError(name + ": no rows");
  }
  DenseMatrix m(rows, cols, std::move(data));
  if (!all_finite(m)) {
    throw ParseError(name + ": non-finite entry");
  }
  return m;
}

DenseMatrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open");
  }
  return read_matrix_csv(in, path);
}

void write_matrix_csv(const DenseMatrix& a, std::ostream& out,
                      const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  char buf[40];
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_matrix_csv(const DenseMatrix& a, const std::string& path,
                      const std::string& comment) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError(path + ": cannot open for writing");
  }
  write_matrix_csv(a, out, comment);
}

NamedCsv read_named_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open");
  }
  NamedCsv out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) {
      if (!name.empty() && name.back() == '\r') name.pop_back();
      out.columns.push_back(name);
    }
    break;
  }
  if (out.columns.empty()) {
    throw ParseError(path + ": missing header");
  }
  out.values = read_matrix_csv(in, path);
  if (out.values.cols() != out.columns.size()) {
    throw ParseError(path + ": header and rows disagree on column count");
  }
  return out;
}

}  // namespace rsvd
