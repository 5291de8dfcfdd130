#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "rsvd/errors.hpp"
#include "rsvd/qr.hpp"
#include "rsvd/rng.hpp"
#include "rsvd/solvers.hpp"
#include "test_util.hpp"

using namespace rsvd;

namespace {

DenseMatrix scale_columns(const DenseMatrix& m, const std::vector<double>& s) {
  DenseMatrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) *= s[j];
  }
  return out;
}

}  // namespace

TEST_CASE("objective_j1 hand arithmetic") {
  const DenseMatrix x(2, 2, {3, 0, 0, 1});
  const DenseMatrix zero_u(2, 1), zero_v(2, 1);
  CHECK(objective_j1(x, zero_u, zero_v, 0.5) ==
        doctest::Approx(frobenius_sq(x)));

  // Exact factorization at lambda = 0.
  const DenseMatrix u(2, 2, {3, 0, 0, 1});
  CHECK(objective_j1(x, u, DenseMatrix::identity(2), 0.0) ==
        doctest::Approx(0.0));

  const double root2 = std::sqrt(2.0);
  const DenseMatrix u1(2, 1, {root2, 0});
  const DenseMatrix v1(2, 1, {root2, 0});
  CHECK(objective_j1(x, u1, v1, 1.0) == doctest::Approx(6.0));

  CHECK_THROWS_AS(objective_j1(x, DenseMatrix(3, 1), v1, 1.0), InputError);
}

TEST_CASE("update_u maps the shrunk right factor onto the left one") {
  const DenseMatrix x = oracle::random_matrix(9, 6, 21);
  const SvdFactors svd = thin_svd(x);
  const double lambda = svd.sigma[2];  // middle of the spectrum
  const ShrinkageSpectrum spec = shrink_singular_values(svd.sigma, lambda, 6);

  const DenseMatrix v = scale_columns(svd.g, spec.omega);
  const DenseMatrix u = update_u(x, v, lambda);
  const DenseMatrix expect = scale_columns(svd.f, spec.omega);
  CHECK(testutil::max_abs_diff(u, expect) < 1e-10);
}

TEST_CASE("update_u with orthonormal V and lambda 0 is plain projection") {
  const DenseMatrix x = oracle::random_matrix(8, 5, 31);
  const DenseMatrix v = oracle::random_orthonormal(5, 3, 32);
  CHECK(testutil::max_abs_diff(update_u(x, v, 0.0), multiply(x, v)) < 1e-12);
}

TEST_CASE("update_u vanishes for overwhelming regularization") {
  const DenseMatrix x = oracle::random_matrix(8, 5, 33);
  const DenseMatrix v = oracle::random_orthonormal(5, 3, 34);
  CHECK(max_abs(update_u(x, v, 1e12)) < 1e-6);
}

TEST_CASE("update_v mirrors update_u through the transpose") {
  const DenseMatrix x = oracle::random_matrix(7, 5, 41);
  const DenseMatrix u = oracle::random_matrix(7, 2, 42);
  const DenseMatrix via_v = update_v(x, u, 0.7);
  const DenseMatrix via_u = update_u(transpose(x), u, 0.7);
  CHECK(testutil::max_abs_diff(via_v, via_u) < 1e-12);
}

TEST_CASE("closed form is a fixed point of the alternating updates") {
  const DenseMatrix x = oracle::random_matrix(10, 7, 51);
  const double lambda = 0.8;
  const RsvdSolution sol = rsvd_closed_form(x, 3, lambda);
  const DenseMatrix u_next = update_u(x, sol.v, lambda);
  const DenseMatrix v_next = update_v(x, u_next, lambda);
  CHECK(testutil::max_abs_diff(u_next, sol.u) < 1e-8);
  CHECK(testutil::max_abs_diff(v_next, sol.v) < 1e-8);
}

TEST_CASE("alternating solver reaches the closed-form objective") {
  const DenseMatrix x(2, 2, {3, 0, 0, 1});
  RsvdConfig cfg;
  cfg.k = 1;
  cfg.lambda = 1.0;
  cfg.tol = 1e-12;
  cfg.max_iter = 500;
  cfg.seed = 1;
  const RsvdSolution als = rsvd_als(x, cfg);
  const RsvdSolution closed = rsvd_closed_form(x, 1, 1.0);
  CHECK(als.objective == doctest::Approx(closed.objective).epsilon(1e-8));
  CHECK(closed.objective == doctest::Approx(6.0));
}

TEST_CASE("unregularized full-rank run reconstructs the input") {
  DenseMatrix left = oracle::random_matrix(6, 2, 61);
  DenseMatrix right = oracle::random_matrix(5, 2, 62);
  const DenseMatrix x = multiply_a_bt(left, right);  // exact rank 2
  RsvdConfig cfg;
  cfg.k = 2;
  cfg.lambda = 0.0;
  cfg.tol = 1e-13;
  cfg.max_iter = 2000;
  cfg.seed = 3;
  const RsvdSolution sol = rsvd_als(x, cfg);
  CHECK(sol.objective < 1e-8);
  CHECK(testutil::max_abs_diff(x, multiply_a_bt(sol.u, sol.v)) < 1e-6);
}

TEST_CASE("alternating and closed-form objectives agree on random input") {
  const DenseMatrix x = oracle::random_matrix(20, 15, 1);
  for (const double lambda : {0.5, 2.0}) {
    RsvdConfig cfg;
    cfg.k = 4;
    cfg.lambda = lambda;
    cfg.tol = 1e-10;
    cfg.max_iter = 3000;
    cfg.seed = 1;
    const RsvdSolution als = rsvd_als(x, cfg);
    const RsvdSolution closed = rsvd_closed_form(x, 4, lambda);
    CHECK(als.status == SolutionStatus::converged);
    CHECK(std::abs(als.objective - closed.objective) / closed.objective <
          1e-6);
  }
}

TEST_CASE("objective history is nonincreasing") {
  std::uint64_t seed = 500;
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 5 + seed % 20;
    const std::size_t m = 4 + seed % 13;
    const DenseMatrix x = oracle::random_matrix(n, m, seed);
    RsvdConfig cfg;
    cfg.k = 1 + seed % std::min(n, m);
    cfg.lambda = (seed % 3) * 0.7;
    cfg.tol = 1e-10;
    cfg.seed = seed + 1;
    const RsvdSolution sol = rsvd_als(x, cfg);
    for (std::size_t t = 1; t < sol.objective_history.size(); ++t) {
      CHECK(sol.objective_history[t] <=
            sol.objective_history[t - 1] + 1e-12);
    }
    seed += 17;
  }
}

TEST_CASE("non-convergence is flagged, not thrown") {
  const DenseMatrix x = oracle::random_matrix(12, 9, 71);
  RsvdConfig cfg;
  cfg.k = 3;
  cfg.lambda = 0.0;
  cfg.max_iter = 1;
  cfg.tol = 1e-16;
  const RsvdSolution sol = rsvd_als(x, cfg);
  CHECK(sol.status == SolutionStatus::max_iter_reached);
  CHECK(sol.iterations == 1);
  CHECK(sol.objective_history.size() == 1);
}

TEST_CASE("shrink_singular_values") {
  const ShrinkageSpectrum a = shrink_singular_values({5.0}, 3.0, 1);
  CHECK(a.omega[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(a.effective_rank == 1);

  const ShrinkageSpectrum b = shrink_singular_values({2.0}, 3.0, 1);
  CHECK(b.omega[0] == 0.0);
  CHECK(b.effective_rank == 0);

  const ShrinkageSpectrum c = shrink_singular_values({4.0, 3.0, 1.0}, 0.0, 3);
  CHECK(c.omega[0] == doctest::Approx(2.0));
  CHECK(c.omega[1] == doctest::Approx(std::sqrt(3.0)));
  CHECK(c.omega[2] == doctest::Approx(1.0));
  CHECK(c.effective_rank == 3);
}

TEST_CASE("closed form on a diagonal matrix shrinks the spectrum") {
  const DenseMatrix x(2, 2, {3, 0, 0, 1});
  const RsvdSolution sol = rsvd_closed_form(x, 2, 1.0);
  const DenseMatrix prod = multiply_a_bt(sol.u, sol.v);
  CHECK(testutil::max_abs_diff(prod, DenseMatrix(2, 2, {2, 0, 0, 0})) < 1e-12);
  const SvdFactors check = thin_svd(prod);
  CHECK(check.sigma[0] == doctest::Approx(2.0));
  CHECK(check.sigma[1] == doctest::Approx(0.0));
}

TEST_CASE("closed form at lambda 0 and full rank recovers the input") {
  const DenseMatrix x = oracle::random_matrix(7, 4, 81);
  const RsvdSolution sol = rsvd_closed_form(x, 4, 0.0);
  CHECK(testutil::max_abs_diff(x, multiply_a_bt(sol.u, sol.v)) < 1e-8);
}

TEST_CASE("closed form beats random restarts") {
  const DenseMatrix x = oracle::random_matrix(30, 20, 3);
  const double lambda = 1.5;
  const RsvdSolution closed = rsvd_closed_form(x, 5, lambda);
  for (std::uint64_t restart = 0; restart < 20; ++restart) {
    RsvdConfig cfg;
    cfg.k = 5;
    cfg.lambda = lambda;
    cfg.tol = 1e-10;
    cfg.max_iter = 2000;
    cfg.seed = restart;
    const RsvdSolution als = rsvd_als(x, cfg);
    CHECK(closed.objective <= als.objective + 1e-8);
  }
}

TEST_CASE("all-shrunk spectrum is flagged and returns zero factors") {
  const DenseMatrix x(2, 2, {3, 0, 0, 1});
  const RsvdSolution sol = rsvd_closed_form(x, 2, 10.0);
  CHECK(sol.status == SolutionStatus::degenerate_all_zero);
  CHECK(max_abs(sol.u) == 0.0);
  CHECK(max_abs(sol.v) == 0.0);
  CHECK(sol.objective == doctest::Approx(frobenius_sq(x)));
}

TEST_CASE("dv_residual") {
  const DenseMatrix a = oracle::random_matrix(4, 3, 91);
  CHECK(dv_residual(a, a) == 0.0);
  CHECK(dv_residual(a, DenseMatrix(4, 3)) ==
        doctest::Approx(std::sqrt(frobenius_sq(a))));
  CHECK(dv_residual(DenseMatrix::identity(2), DenseMatrix(2, 2)) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(dv_residual(a, DenseMatrix(3, 3)), InputError);
}

TEST_CASE("subspace_residuals") {
  const DenseMatrix x = oracle::random_matrix(9, 6, 101);
  const SvdFactors svd = thin_svd(x);

  const DenseMatrix fk = svd.f.left_columns(3);
  const DenseMatrix gk = svd.g.left_columns(3);
  const auto [r1, r2] = subspace_residuals(fk, gk, svd);
  CHECK(r1 < 1e-20);
  CHECK(r2 < 1e-20);

  // A direction outside the column span projects to nothing.
  const DenseMatrix tall(3, 1, {1, 0, 0});
  const SvdFactors tall_svd = thin_svd(tall, 1);
  const DenseMatrix outside(3, 1, {0, 1, 0});
  const auto [o1, o2] =
      subspace_residuals(outside, DenseMatrix(1, 1, {1.0}), tall_svd);
  CHECK(o1 == doctest::Approx(frobenius_sq(outside)));
  CHECK(o2 == doctest::Approx(0.0));

  const RsvdSolution closed = rsvd_closed_form(x, 4, 0.6);
  const auto [c1, c2] = subspace_residuals(closed.u, closed.v, svd);
  CHECK(c1 < 1e-16 * frobenius_sq(closed.u));
  CHECK(c2 < 1e-16 * frobenius_sq(closed.v));
}

TEST_CASE("the optimum admits the diagonal QR form") {
  const DenseMatrix x = oracle::random_matrix(16, 11, 111);
  const SvdFactors data_svd = thin_svd(x);
  const ShrinkageSpectrum spec =
      shrink_singular_values(data_svd.sigma, 1.0, 3);

  // The canonical solution's right factor is G_k Omega: its R factor is
  // diagonal and carries omega on the diagonal.
  const RsvdSolution closed = rsvd_closed_form(x, 3, 1.0);
  const QrFactors qr = thin_qr(closed.v);
  double off = 0.0;
  for (std::size_t i = 0; i < qr.r.rows(); ++i) {
    for (std::size_t j = 0; j < qr.r.cols(); ++j) {
      if (i != j) off += qr.r(i, j) * qr.r(i, j);
    }
  }
  CHECK(std::sqrt(off) < 1e-10 * std::sqrt(frobenius_sq(qr.r)));
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(qr.r(i, i) == doctest::Approx(spec.omega[i]).epsilon(1e-8));
  }

  // The alternating limit carries a frozen orthogonal rotation W of the
  // canonical factors (every (F_k Omega W, G_k Omega W) is a fixed point),
  // so its columns need not be orthogonal. The rotation-invariant content
  // survives: the singular values of the converged V equal omega.
  RsvdConfig cfg;
  cfg.k = 3;
  cfg.lambda = 1.0;
  cfg.tol = 1e-12;
  cfg.max_iter = 4000;
  cfg.seed = 9;
  const RsvdSolution als = rsvd_als(x, cfg);
  REQUIRE(als.status == SolutionStatus::converged);
  const SvdFactors v_svd = thin_svd(als.v);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(v_svd.sigma[i] ==
          doctest::Approx(spec.omega[i]).epsilon(1e-6));
  }
}

TEST_CASE("trace inequality for projected spectra") {
  // Random orthonormal basis, descending nonnegative diagonal; the
  // projected quadratic form never exceeds the aligned pairing.
  std::uint64_t seed = 300;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 4 + seed % 6;
    const std::size_t k = 1 + seed % m;
    const DenseMatrix g = oracle::random_orthonormal(m, m, seed);
    const DenseMatrix v_perp = oracle::random_orthonormal(m, k, seed + 1);
    Rng rng(seed + 2);
    std::vector<double> sigma_sq(m), d(k);
    for (double& v : sigma_sq) v = rng.uniform01() * 4.0;
    for (double& v : d) v = rng.uniform01();
    std::sort(sigma_sq.rbegin(), sigma_sq.rend());
    std::sort(d.rbegin(), d.rend());

    DenseMatrix scaled = g;  // G diag(sigma^2) G^T V_perp, built in stages
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) scaled(i, j) *= sigma_sq[j];
    }
    const DenseMatrix core =
        multiply_at_b(v_perp, multiply(multiply_a_bt(scaled, g), v_perp));
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      lhs += core(i, i) * d[i];
      rhs += sigma_sq[i] * d[i];
    }
    CHECK(lhs <= rhs + 1e-10);
    seed += 13;
  }
}

TEST_CASE("stronger regularization does not slow convergence") {
  int ordered = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DenseMatrix x = oracle::random_matrix(18, 12, 7000 + seed);
    auto iterations_at = [&](double lambda) {
      RsvdConfig cfg;
      cfg.k = 3;
      cfg.lambda = lambda;
      cfg.tol = 1e-10;
      cfg.max_iter = 5000;
      cfg.seed = seed;
      return rsvd_als(x, cfg).iterations;
    };
    if (iterations_at(10.0) <= iterations_at(0.0)) ++ordered;
  }
  CHECK(ordered >= 9);
}
