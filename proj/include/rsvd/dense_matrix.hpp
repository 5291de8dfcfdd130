#ifndef RSVD_DENSE_MATRIX_HPP
#define RSVD_DENSE_MATRIX_HPP

#include <cstddef>
#include <utility>
#include <vector>

namespace rsvd {

/// Set of (row, col) index pairs.
using IndexSet = std::vector<std::pair<std::size_t, std::size_t>>;

/// Dense real matrix, row-major storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  const double* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }
  double* row_ptr(std::size_t r) { return data_.data() + r * cols_; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  /// First k columns as a new matrix.
  DenseMatrix left_columns(std::size_t k) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix transpose(const DenseMatrix& a);

/// C = A B
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// C = A^T B
DenseMatrix multiply_at_b(const DenseMatrix& a, const DenseMatrix& b);
/// C = A B^T
DenseMatrix multiply_a_bt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

/// Sum of squared entries.
double frobenius_sq(const DenseMatrix& a);

/// Sum of squared entries over the given index set.
double masked_sq_norm(const DenseMatrix& a, const IndexSet& omega);

double max_abs(const DenseMatrix& a);

bool all_finite(const DenseMatrix& a);

}  // namespace rsvd

#endif
