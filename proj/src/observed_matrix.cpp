#include "rsvd/observed_matrix.hpp"

#include <algorithm>
#include <string>

#include "rsvd/errors.hpp"

namespace rsvd {

ObservedMatrix::ObservedMatrix(std::size_t n_users, std::size_t m_items,
                               std::vector<Rating> entries)
    : n_users_(n_users), m_items_(m_items), entries_(std::move(entries)) {
  if (n_users_ == 0 || m_items_ == 0) {
    throw InputError("ObservedMatrix: dimensions must be at least 1x1");
  }
  if (entries_.empty()) {
    throw InputError("ObservedMatrix: no observed entries");
  }
  std::sort(entries_.begin(), entries_.end(),
            [](const Rating& a, const Rating& b) {
              return a.user != b.user ? a.user < b.user : a.item < b.item;
            });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Rating& e = entries_[i];
    if (e.user >= n_users_ || e.item >= m_items_) {
      throw InputError("ObservedMatrix: entry (" + std::to_string(e.user) +
                       "," + std::to_string(e.item) + ") out of range");
    }
    if (i > 0 && entries_[i - 1].user == e.user &&
        entries_[i - 1].item == e.item) {
      throw InputError("ObservedMatrix: duplicate entry (" +
                       std::to_string(e.user) + "," + std::to_string(e.item) +
                       ")");
    }
  }
  row_offsets_.assign(n_users_ + 1, 0);
  for (const Rating& e : entries_) ++row_offsets_[e.user + 1];
  for (std::size_t u = 0; u < n_users_; ++u) {
    row_offsets_[u + 1] += row_offsets_[u];
  }
}

std::span<const Rating> ObservedMatrix::row(std::size_t user) const {
  if (user >= n_users_) {
    throw InputError("ObservedMatrix::row: user out of range");
  }
  return {entries_.data() + row_offsets_[user],
          row_offsets_[user + 1] - row_offsets_[user]};
}

bool ObservedMatrix::has(std::size_t user, std::size_t item) const {
  const auto r = row(user);
  auto it = std::lower_bound(
      r.begin(), r.end(), item,
      [](const Rating& e, std::size_t needle) { return e.item < needle; });
  return it != r.end() && it->item == item;
}

IndexSet ObservedMatrix::index_set() const {
  IndexSet out;
  out.reserve(entries_.size());
  for (const Rating& e : entries_) out.emplace_back(e.user, e.item);
  return out;
}

double masked_objective(const ObservedMatrix& observed, const DenseMatrix& u,
                        const DenseMatrix& v, double lambda) {
  if (u.rows() != observed.n_users() || v.rows() != observed.m_items() ||
      u.cols() != v.cols()) {
    throw InputError("masked_objective: factor dimensions disagree");
  }
  const std::size_t k = u.cols();
  double fit = 0.0;
  for (const Rating& e : observed.entries()) {
    const double* ur = u.row_ptr(e.user);
    const double* vr = v.row_ptr(e.item);
    double pred = 0.0;
    for (std::size_t c = 0; c < k; ++c) pred += ur[c] * vr[c];
    const double d = e.value - pred;
    fit += d * d;
  }
  return fit + lambda * (frobenius_sq(u) + frobenius_sq(v));
}

}  // namespace rsvd
