#include "rsvd/svd.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <string>

#include "rsvd/errors.hpp"
#include "rsvd/rng.hpp"

namespace rsvd {

namespace {

// Column-major working storage for the Jacobi kernels: col(j) is a
// contiguous run of `lead` doubles.
struct ColMat {
  std::size_t lead = 0;   // column length
  std::size_t ncols = 0;
  std::vector<double> a;

  ColMat(std::size_t lead_, std::size_t ncols_)
      : lead(lead_), ncols(ncols_), a(lead_ * ncols_, 0.0) {}

  double* col(std::size_t j) { return a.data() + j * lead; }
  const double* col(std::size_t j) const { return a.data() + j * lead; }
};

ColMat to_colmajor(const DenseMatrix& x) {
  ColMat c(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* r = x.row_ptr(i);
    for (std::size_t j = 0; j < x.cols(); ++j) c.col(j)[i] = r[j];
  }
  return c;
}

DenseMatrix to_rowmajor(const ColMat& c, std::size_t keep_cols) {
  DenseMatrix x(c.lead, keep_cols);
  for (std::size_t j = 0; j < keep_cols; ++j) {
    const double* cj = c.col(j);
    for (std::size_t i = 0; i < c.lead; ++i) x(i, j) = cj[i];
  }
  return x;
}

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

struct JacobiResult {
  ColMat u;                  // lead x m, orthonormal columns (zero sigma
                             // columns completed from unit vectors)
  std::vector<double> sigma; // m, nonincreasing
  ColMat v;                  // m x m, orthonormal
};

// One-sided Jacobi on the columns of a (lead x m, lead >= m not required
// but intended). Rotations are accumulated into v. Plain cyclic sweeps;
// a sweep with no rotations ends the iteration.
JacobiResult jacobi_svd_columns(ColMat a) {
  const std::size_t n = a.lead;
  const std::size_t m = a.ncols;
  ColMat v(m, m);
  for (std::size_t j = 0; j < m; ++j) v.col(j)[j] = 1.0;

  constexpr double kEps = 1e-15;
  constexpr int kMaxSweeps = 64;

  std::vector<double> sq(m);
  for (std::size_t j = 0; j < m; ++j) sq[j] = dot(a.col(j), a.col(j), n);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < m; ++p) {
      for (std::size_t q = p + 1; q < m; ++q) {
        double* ap = a.col(p);
        double* aq = a.col(q);
        const double gamma = dot(ap, aq, n);
        if (std::abs(gamma) <= kEps * std::sqrt(sq[p] * sq[q]) ||
            gamma == 0.0) {
          continue;
        }
        rotated = true;
        const double zeta = (sq[q] - sq[p]) / (2.0 * gamma);
        const double t =
            (zeta >= 0.0 ? 1.0 : -1.0) /
            (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double x = ap[i], y = aq[i];
          ap[i] = c * x - s * y;
          aq[i] = s * x + c * y;
        }
        double* vp = v.col(p);
        double* vq = v.col(q);
        for (std::size_t i = 0; i < m; ++i) {
          const double x = vp[i], y = vq[i];
          vp[i] = c * x - s * y;
          vq[i] = s * x + c * y;
        }
        sq[p] -= t * gamma;
        sq[q] += t * gamma;
      }
    }
    if (!rotated) break;
    // Refresh the cached squares once per sweep against drift.
    for (std::size_t j = 0; j < m; ++j) sq[j] = dot(a.col(j), a.col(j), n);
  }

  std::vector<double> sigma(m);
  for (std::size_t j = 0; j < m; ++j) {
    sigma[j] = std::sqrt(dot(a.col(j), a.col(j), n));
  }

  // Sort by sigma descending, stable on ties.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return sigma[i] > sigma[j];
  });

  JacobiResult out{ColMat(n, m), std::vector<double>(m), ColMat(m, m)};
  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t src = order[j];
    out.sigma[j] = sigma[src];
    std::memcpy(out.v.col(j), v.col(src), m * sizeof(double));
    if (sigma[src] > 0.0) {
      const double inv = 1.0 / sigma[src];
      const double* col = a.col(src);
      double* dst = out.u.col(j);
      for (std::size_t i = 0; i < n; ++i) dst[i] = col[i] * inv;
    }
  }

  // Columns with exactly zero sigma get deterministic orthonormal filler.
  // Zeros sort last, so column j only needs Gram-Schmidt against 0..j-1.
  for (std::size_t j = 0; j < m; ++j) {
    if (out.sigma[j] > 0.0) continue;
    double* dst = out.u.col(j);
    bool placed = false;
    for (std::size_t cand = 0; cand < n && !placed; ++cand) {
      std::vector<double> w(n, 0.0);
      w[cand] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < j; ++c) {
          const double proj = dot(w.data(), out.u.col(c), n);
          for (std::size_t i = 0; i < n; ++i) w[i] -= proj * out.u.col(c)[i];
        }
      }
      const double norm = std::sqrt(dot(w.data(), w.data(), n));
      if (norm > 0.5) {
        for (std::size_t i = 0; i < n; ++i) dst[i] = w[i] / norm;
        placed = true;
      }
    }
    if (!placed) {
      throw NumericalError("thin_svd: failed to complete orthonormal basis");
    }
  }
  return out;
}

// Canonical signs: largest-magnitude entry of each left vector positive;
// the paired right vector flips with it.
void fix_signs(DenseMatrix& f, DenseMatrix& g) {
  for (std::size_t j = 0; j < f.cols(); ++j) {
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < f.rows(); ++i) {
      const double v = std::abs(f(i, j));
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    if (f(arg, j) < 0.0) {
      for (std::size_t i = 0; i < f.rows(); ++i) f(i, j) = -f(i, j);
      for (std::size_t i = 0; i < g.rows(); ++i) g(i, j) = -g(i, j);
    }
  }
}

SvdFactors truncate(SvdFactors full, std::size_t k) {
  if (k == kFullRank || k == full.sigma.size()) return full;
  SvdFactors out;
  out.f = full.f.left_columns(k);
  out.g = full.g.left_columns(k);
  out.sigma.assign(full.sigma.begin(), full.sigma.begin() + k);
  return out;
}

// Full SVD by one-sided Jacobi; the wide case goes through the transpose.
SvdFactors jacobi_full_svd(const DenseMatrix& x) {
  const bool wide = x.rows() < x.cols();
  JacobiResult jr = wide ? jacobi_svd_columns(to_colmajor(transpose(x)))
                         : jacobi_svd_columns(to_colmajor(x));
  SvdFactors out;
  DenseMatrix u = to_rowmajor(jr.u, jr.u.ncols);
  DenseMatrix v = to_rowmajor(jr.v, jr.v.ncols);
  if (wide) {
    out.f = std::move(v);
    out.g = std::move(u);
  } else {
    out.f = std::move(u);
    out.g = std::move(v);
  }
  out.sigma = std::move(jr.sigma);
  fix_signs(out.f, out.g);
  return out;
}

// Modified Gram-Schmidt (two passes) on the columns of c. Columns that come
// out dependent are replaced by unit-vector filler orthogonalized against
// the rest, so the result always has orthonormal columns.
void orthonormalize(ColMat& c) {
  const std::size_t n = c.lead;
  const std::size_t m = c.ncols;
  for (std::size_t j = 0; j < m; ++j) {
    double* cj = c.col(j);
    double norm_before = std::sqrt(dot(cj, cj, n));
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < j; ++p) {
        const double proj = dot(c.col(p), cj, n);
        const double* cp = c.col(p);
        for (std::size_t i = 0; i < n; ++i) cj[i] -= proj * cp[i];
      }
    }
    double norm = std::sqrt(dot(cj, cj, n));
    if (norm <= 1e-12 * std::max(norm_before, 1.0)) {
      bool placed = false;
      for (std::size_t cand = 0; cand < n && !placed; ++cand) {
        for (std::size_t i = 0; i < n; ++i) cj[i] = (i == cand) ? 1.0 : 0.0;
        for (int pass = 0; pass < 2; ++pass) {
          for (std::size_t p = 0; p < j; ++p) {
            const double proj = dot(c.col(p), cj, n);
            const double* cp = c.col(p);
            for (std::size_t i = 0; i < n; ++i) cj[i] -= proj * cp[i];
          }
        }
        norm = std::sqrt(dot(cj, cj, n));
        if (norm > 0.5) placed = true;
      }
      if (!placed) {
        throw NumericalError("orthonormalize: basis completion failed");
      }
    }
    const double inv = 1.0 / norm;
    for (std::size_t i = 0; i < n; ++i) cj[i] *= inv;
  }
}

// y (n x b) = x (n x m) * v (m x b, col-major)
ColMat mul_x_cols(const DenseMatrix& x, const ColMat& v) {
  ColMat y(x.rows(), v.ncols);
  for (std::size_t j = 0; j < v.ncols; ++j) {
    const double* vj = v.col(j);
    double* yj = y.col(j);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      yj[i] = dot(x.row_ptr(i), vj, x.cols());
    }
  }
  return y;
}

// z (m x b) = x^T (m x n) * q (n x b, col-major)
ColMat mul_xt_cols(const DenseMatrix& x, const ColMat& q) {
  ColMat z(x.cols(), q.ncols);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double* xi = x.row_ptr(i);
    for (std::size_t j = 0; j < q.ncols; ++j) {
      const double qij = q.col(j)[i];
      if (qij == 0.0) continue;
      double* zj = z.col(j);
      for (std::size_t l = 0; l < x.cols(); ++l) zj[l] += qij * xi[l];
    }
  }
  return z;
}

// Cyclic two-sided Jacobi eigensolver for a small symmetric matrix,
// eigenvalues descending. Used on the b x b Ritz block only.
void small_sym_eig(std::vector<double>& mat, std::size_t b,
                   std::vector<double>& eigvals,
                   std::vector<double>& eigvecs) {
  eigvecs.assign(b * b, 0.0);
  for (std::size_t i = 0; i < b; ++i) eigvecs[i * b + i] = 1.0;
  auto at = [&](std::size_t i, std::size_t j) -> double& {
    return mat[i * b + j];
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (std::size_t i = 0; i < b; ++i) {
      diag += at(i, i) * at(i, i);
      for (std::size_t j = i + 1; j < b; ++j) off += at(i, j) * at(i, j);
    }
    if (off <= 1e-30 * std::max(diag, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < b; ++p) {
      for (std::size_t q = p + 1; q < b; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const double app = at(p, p), aqq = at(q, q);
        at(p, p) = app - t * apq;
        at(q, q) = aqq + t * apq;
        at(p, q) = 0.0;
        at(q, p) = 0.0;
        for (std::size_t r = 0; r < b; ++r) {
          if (r != p && r != q) {
            const double arp = at(r, p), arq = at(r, q);
            at(r, p) = at(p, r) = c * arp - s * arq;
            at(r, q) = at(q, r) = s * arp + c * arq;
          }
          const double vrp = eigvecs[r * b + p], vrq = eigvecs[r * b + q];
          eigvecs[r * b + p] = c * vrp - s * vrq;
          eigvecs[r * b + q] = s * vrp + c * vrq;
        }
      }
    }
  }
  eigvals.resize(b);
  std::vector<std::size_t> order(b);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return at(i, i) > at(j, j);
  });
  std::vector<double> sorted_vecs(b * b);
  for (std::size_t j = 0; j < b; ++j) {
    eigvals[j] = at(order[j], order[j]);
    for (std::size_t i = 0; i < b; ++i) {
      sorted_vecs[i * b + j] = eigvecs[i * b + order[j]];
    }
  }
  eigvecs.swap(sorted_vecs);
}

// Ritz-accelerated subspace iteration for the leading k triplets of a large
// matrix. The block is oversampled; convergence is judged on the top-k
// Ritz values only. The finish recomputes a small Jacobi SVD of X*V so that
// X g_i = sigma_i f_i holds to working precision.
SvdFactors subspace_topk(const DenseMatrix& x, std::size_t k,
                         const DenseMatrix* guess, double tol) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  const std::size_t min_dim = std::min(n, m);
  const std::size_t b = std::min(k + 8, min_dim);

  ColMat v(m, b);
  std::size_t filled = 0;
  if (guess != nullptr && guess->rows() == m) {
    const std::size_t take = std::min(guess->cols(), b);
    for (std::size_t j = 0; j < take; ++j) {
      for (std::size_t i = 0; i < m; ++i) v.col(j)[i] = (*guess)(i, j);
    }
    filled = take;
  }
  Rng rng(0x5eedbeef17ULL);
  for (std::size_t j = filled; j < b; ++j) {
    for (std::size_t i = 0; i < m; ++i) v.col(j)[i] = rng.uniform_pm1();
  }
  orthonormalize(v);

  std::vector<double> prev(k, -1.0);
  std::vector<double> eigvals, eigvecs, ritz;
  int stable_rounds = 0;
  constexpr int kMaxIters = 500;

  for (int iter = 0; iter < kMaxIters; ++iter) {
    ColMat y = mul_x_cols(x, v);
    orthonormalize(y);
    ColMat z = mul_xt_cols(x, y);

    // Ritz block M = Z^T Z, eigenvalues are squared singular estimates.
    ritz.assign(b * b, 0.0);
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = i; j < b; ++j) {
        const double s = dot(z.col(i), z.col(j), m);
        ritz[i * b + j] = s;
        ritz[j * b + i] = s;
      }
    }
    small_sym_eig(ritz, b, eigvals, eigvecs);

    // Rotate Z onto the Ritz basis and reorthonormalize for the next pass.
    ColMat zw(m, b);
    for (std::size_t j = 0; j < b; ++j) {
      double* out = zw.col(j);
      for (std::size_t c = 0; c < b; ++c) {
        const double w = eigvecs[c * b + j];
        if (w == 0.0) continue;
        const double* zc = z.col(c);
        for (std::size_t i = 0; i < m; ++i) out[i] += w * zc[i];
      }
    }
    v = std::move(zw);
    orthonormalize(v);

    const double scale = std::sqrt(std::max(eigvals[0], 0.0));
    bool settled = true;
    for (std::size_t i = 0; i < k; ++i) {
      const double est = std::sqrt(std::max(eigvals[i], 0.0));
      if (std::abs(est - prev[i]) > tol * std::max(scale, 1e-300)) {
        settled = false;
      }
      prev[i] = est;
    }
    stable_rounds = settled ? stable_rounds + 1 : 0;
    if (stable_rounds >= 2) break;
  }

  // Final pairing through a small Jacobi SVD of X*V.
  ColMat s = mul_x_cols(x, v);
  JacobiResult jr = jacobi_svd_columns(std::move(s));

  SvdFactors out;
  out.f = to_rowmajor(jr.u, k);
  out.sigma.assign(jr.sigma.begin(), jr.sigma.begin() + k);
  DenseMatrix vs = to_rowmajor(jr.v, k);  // m=b rows here: b x k
  // G = V * Vs, keeping only the leading k columns.
  out.g = DenseMatrix(m, k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t c = 0; c < b; ++c) acc += v.col(c)[i] * vs(c, j);
      out.g(i, j) = acc;
    }
  }
  fix_signs(out.f, out.g);
  return out;
}

}  // namespace

SvdFactors thin_svd(const DenseMatrix& x, std::size_t k) {
  return thin_svd_warm(x, k, nullptr);
}

SvdFactors thin_svd_warm(const DenseMatrix& x, std::size_t k,
                         const DenseMatrix* right_guess, double tol) {
  if (x.empty()) {
    throw InputError("thin_svd: empty matrix");
  }
  if (!all_finite(x)) {
    throw InputError("thin_svd: non-finite entries");
  }
  const std::size_t min_dim = std::min(x.rows(), x.cols());
  if (k > min_dim) {
    throw InputError("thin_svd: k = " + std::to_string(k) +
                     " exceeds min dimension " + std::to_string(min_dim));
  }
  const std::size_t want = (k == kFullRank) ? min_dim : k;
  const std::size_t block = std::min(want + 8, min_dim);
  const bool iterative_pays_off = min_dim > 64 && 3 * block <= min_dim;
  if (iterative_pays_off && k != kFullRank) {
    return subspace_topk(x, k, right_guess, tol);
  }
  return truncate(jacobi_full_svd(x), want);
}

}  // namespace rsvd
