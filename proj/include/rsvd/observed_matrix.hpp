#ifndef RSVD_OBSERVED_MATRIX_HPP
#define RSVD_OBSERVED_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "rsvd/dense_matrix.hpp"

namespace rsvd {

struct Rating {
  std::size_t user = 0;
  std::size_t item = 0;
  double value = 0.0;
};

/// Sparse rating matrix with an explicit observed-index set. Entries are
/// kept sorted by (user, item); duplicates are rejected. At least one entry
/// is required.
class ObservedMatrix {
 public:
  ObservedMatrix(std::size_t n_users, std::size_t m_items,
                 std::vector<Rating> entries);

  std::size_t n_users() const { return n_users_; }
  std::size_t m_items() const { return m_items_; }
  std::size_t size() const { return entries_.size(); }  // |Omega|

  const std::vector<Rating>& entries() const { return entries_; }
  std::span<const Rating> row(std::size_t user) const;
  bool has(std::size_t user, std::size_t item) const;

  /// The observed (i, j) pairs in sorted order.
  IndexSet index_set() const;

 private:
  std::size_t n_users_;
  std::size_t m_items_;
  std::vector<Rating> entries_;           // sorted by (user, item)
  std::vector<std::size_t> row_offsets_;  // n_users + 1
};

/// Sum over observed entries of (X - U V^T)_ij^2 plus the ridge terms.
/// With lambda = 0 this is the plain masked reconstruction error.
double masked_objective(const ObservedMatrix& observed, const DenseMatrix& u,
                        const DenseMatrix& v, double lambda);

}  // namespace rsvd

#endif
