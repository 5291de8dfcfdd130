#include "rsvd/dense_matrix.hpp"

#include <cmath>
#include <string>

#include "rsvd/errors.hpp"

namespace rsvd {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) {
    throw InputError("DenseMatrix: dimensions must be at least 1x1");
  }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows == 0 || cols == 0) {
    throw InputError("DenseMatrix: dimensions must be at least 1x1");
  }
  if (data_.size() != rows * cols) {
    throw InputError("DenseMatrix: data length " +
                     std::to_string(data_.size()) + " does not match " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::left_columns(std::size_t k) const {
  if (k == 0 || k > cols_) {
    throw InputError("left_columns: k out of range");
  }
  DenseMatrix out(rows_, k);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* src = row_ptr(i);
    double* dst = out.row_ptr(i);
    for (std::size_t j = 0; j < k; ++j) dst[j] = src[j];
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out(j, i) = a(i, j);
    }
  }
  return out;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw InputError("multiply: inner dimensions disagree");
  }
  DenseMatrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c.row_ptr(i);
    const double* ai = a.row_ptr(i);
    for (std::size_t l = 0; l < k; ++l) {
      const double ail = ai[l];
      if (ail == 0.0) continue;
      const double* bl = b.row_ptr(l);
      for (std::size_t j = 0; j < m; ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw InputError("multiply_at_b: row counts disagree");
  }
  DenseMatrix c(a.cols(), b.cols());
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  for (std::size_t l = 0; l < n; ++l) {
    const double* al = a.row_ptr(l);
    const double* bl = b.row_ptr(l);
    for (std::size_t i = 0; i < k; ++i) {
      const double ali = al[i];
      if (ali == 0.0) continue;
      double* ci = c.row_ptr(i);
      for (std::size_t j = 0; j < m; ++j) ci[j] += ali * bl[j];
    }
  }
  return c;
}

DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw InputError("multiply_a_bt: column counts disagree");
  }
  DenseMatrix c(a.rows(), b.rows());
  const std::size_t n = a.rows(), k = a.cols(), m = b.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const double* ai = a.row_ptr(i);
    double* ci = c.row_ptr(i);
    for (std::size_t j = 0; j < m; ++j) {
      const double* bj = b.row_ptr(j);
      double s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += ai[l] * bj[l];
      ci[j] = s;
    }
  }
  return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError("subtract: shapes disagree");
  }
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    c.data()[i] = a.data()[i] - b.data()[i];
  }
  return c;
}

double frobenius_sq(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

double masked_sq_norm(const DenseMatrix& a, const IndexSet& omega) {
  double s = 0.0;
  for (const auto& [i, j] : omega) {
    if (i >= a.rows() || j >= a.cols()) {
      throw InputError("masked_sq_norm: index (" + std::to_string(i) + "," +
                       std::to_string(j) + ") out of range");
    }
    const double v = a(i, j);
    s += v * v;
  }
  return s;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

bool all_finite(const DenseMatrix& a) {
  for (double v : a.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace rsvd
