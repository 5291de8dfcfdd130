#include "rsvd/qr.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rsvd/errors.hpp"

namespace rsvd {

namespace {

double column_norm(const DenseMatrix& a, std::size_t col, std::size_t from) {
  double s = 0.0;
  for (std::size_t i = from; i < a.rows(); ++i) s += a(i, col) * a(i, col);
  return std::sqrt(s);
}

}  // namespace

QrFactors thin_qr(const DenseMatrix& v) {
  const std::size_t m = v.rows();
  const std::size_t k = v.cols();
  if (k > m) {
    throw InputError("thin_qr: more columns than rows");
  }

  // Work matrix: R accumulates in the upper triangle, Householder vectors
  // live on and below the diagonal of each eliminated column.
  DenseMatrix work = v;
  std::vector<double> beta(k, 0.0);   // 2 / ||w||^2 per reflector
  std::vector<double> rdiag(k, 0.0);  // R_jj before the sign fix
  std::vector<double> input_norms(k);
  for (std::size_t j = 0; j < k; ++j) input_norms[j] = column_norm(v, j, 0);

  for (std::size_t j = 0; j < k; ++j) {
    const double norm = column_norm(work, j, j);
    // Deficiency is judged against the column's original scale.
    if (norm == 0.0 || norm <= 1e-13 * input_norms[j]) {
      throw NumericalError("thin_qr: column " + std::to_string(j) +
                           " is linearly dependent");
    }
    const double alpha = work(j, j) >= 0.0 ? -norm : norm;
    rdiag[j] = alpha;
    work(j, j) -= alpha;
    double wsq = 0.0;
    for (std::size_t i = j; i < m; ++i) wsq += work(i, j) * work(i, j);
    beta[j] = 2.0 / wsq;

    for (std::size_t c = j + 1; c < k; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += work(i, j) * work(i, c);
      const double f = beta[j] * dot;
      for (std::size_t i = j; i < m; ++i) work(i, c) -= f * work(i, j);
    }
  }

  // Extract R (k x k upper triangular, exact zeros below the diagonal).
  DenseMatrix r(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    r(i, i) = rdiag[i];
    for (std::size_t j = i + 1; j < k; ++j) r(i, j) = work(i, j);
  }

  // Form Q by applying the reflectors to the first k identity columns.
  DenseMatrix q(m, k);
  for (std::size_t c = 0; c < k; ++c) q(c, c) = 1.0;
  for (std::size_t j = k; j-- > 0;) {
    for (std::size_t c = 0; c < k; ++c) {
      double dot = 0.0;
      for (std::size_t i = j; i < m; ++i) dot += work(i, j) * q(i, c);
      const double f = beta[j] * dot;
      for (std::size_t i = j; i < m; ++i) q(i, c) -= f * work(i, j);
    }
  }

  // Nonnegative-diagonal convention: flip matching Q column and R row.
  for (std::size_t j = 0; j < k; ++j) {
    if (r(j, j) < 0.0) {
      for (std::size_t c = j; c < k; ++c) r(j, c) = -r(j, c);
      for (std::size_t i = 0; i < m; ++i) q(i, j) = -q(i, j);
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace rsvd
