#include <doctest.h>

#include <cmath>
#include <set>

#include "oracle.hpp"
#include "rsvd/errors.hpp"
#include "rsvd/evaluation.hpp"
#include "rsvd/rng.hpp"
#include "synthetic.hpp"

using namespace rsvd;

TEST_CASE("top_n") {
  const std::vector<double> scores{0.9, 0.1, 0.5};
  CHECK(top_n(scores, {}, 2) == std::vector<std::size_t>{0, 2});

  const std::vector<double> equal{0.5, 0.5, 0.5};
  CHECK(top_n(equal, {}, 3) == std::vector<std::size_t>{0, 1, 2});

  CHECK(top_n(scores, {0}, 1) == std::vector<std::size_t>{2});

  CHECK_THROWS_AS(top_n(scores, {0}, 3), InputError);
  CHECK_THROWS_AS(top_n(scores, {}, 0), InputError);
}

TEST_CASE("top_n_result counts hits without duplicates") {
  const std::vector<double> scores{0.9, 0.1, 0.5, 0.7};
  const TopNResult r = top_n_result(3, scores, {1}, {0, 2}, 3);
  CHECK(r.user == 3);
  CHECK(r.top_items == std::vector<std::size_t>{0, 3, 2});
  CHECK(r.hit_count == 2);
  std::set<std::size_t> unique(r.top_items.begin(), r.top_items.end());
  CHECK(unique.size() == r.top_items.size());
  CHECK(r.hit_count <= std::min<std::size_t>(3, 2));
}

TEST_CASE("precision_recall") {
  const auto [p, r] = precision_recall(2, 10, 5);
  CHECK(p == doctest::Approx(0.2));
  CHECK(r == doctest::Approx(0.4));

  const auto [p0, r0] = precision_recall(0, 4, 9);
  CHECK(p0 == 0.0);
  CHECK(r0 == 0.0);

  const auto [pe, re] = precision_recall(3, 7, 7);
  CHECK(pe == re);

  CHECK_THROWS_AS(precision_recall(0, 0, 5), InputError);
  CHECK_THROWS_AS(precision_recall(0, 5, 0), InputError);
  CHECK_THROWS_AS(precision_recall(6, 5, 9), InputError);
}

TEST_CASE("f1_measure") {
  CHECK(f1_measure(0.4, 0.4) == doctest::Approx(0.4));
  CHECK(f1_measure(0.2, 0.4) == doctest::Approx(0.2666666667));
  CHECK(f1_measure(0.0, 0.0) == 0.0);
  CHECK_THROWS_AS(f1_measure(-0.1, 0.5), InputError);
}

namespace {

// Every user rates the first `block` items; a rank-1 indicator model
// scores exactly those items high.
struct OracleSetup {
  MaskedDataset masked;
  CompletionResult model;
};

OracleSetup oracle_setup(std::size_t n_users, std::size_t m_items,
                         std::size_t block, std::size_t threshold,
                         std::size_t n_mask, std::uint64_t seed) {
  const ObservedMatrix full =
      binarize(synthetic::block_dataset(n_users, m_items, block));
  OracleSetup s{mask_out(full, threshold, n_mask, seed), {}};
  s.model.u = DenseMatrix(n_users, 1);
  for (double& v : s.model.u.data()) v = 1.0;
  s.model.v = DenseMatrix(m_items, 1);
  for (std::size_t j = 0; j < block; ++j) s.model.v(j, 0) = 1.0;
  return s;
}

}  // namespace

TEST_CASE("oracle model scores a perfect curve point") {
  const OracleSetup s = oracle_setup(12, 30, 10, 5, 4, 11);
  const EvalReport report = evaluate(s.model, s.masked);
  REQUIRE(report.curve.size() == 8);
  const PRPoint& at_mask = report.curve[3];
  CHECK(at_mask.precision == doctest::Approx(1.0));
  CHECK(at_mask.recall == doctest::Approx(1.0));
  CHECK(report.f1_at_nmask == doctest::Approx(1.0));
}

TEST_CASE("curve identities hold for an arbitrary model") {
  const OracleSetup s = oracle_setup(15, 40, 12, 6, 5, 3);
  CompletionResult model;
  model.u = oracle::random_matrix(15, 3, 21);
  model.v = oracle::random_matrix(40, 3, 22);
  const EvalReport report = evaluate(model, s.masked);
  REQUIRE(report.curve.size() == 10);
  const PRPoint& at_mask = report.curve[4];
  CHECK(at_mask.precision == doctest::Approx(at_mask.recall).epsilon(1e-12));
  for (std::size_t i = 1; i < report.curve.size(); ++i) {
    CHECK(report.curve[i].recall >= report.curve[i - 1].recall - 1e-12);
  }
  for (const PRPoint& p : report.curve) {
    CHECK(p.precision >= 0.0);
    CHECK(p.precision <= 1.0);
    CHECK(p.recall >= 0.0);
    CHECK(p.recall <= 1.0);
  }
}

TEST_CASE("random scores hit almost nothing at recommendation scale") {
  // One user's worth of the Monte-Carlo baseline: m items, some observed,
  // n_mask hidden; a random scorer recalls about n_mask / pool.
  const std::size_t m = 1682, n_mask = 90, observed = 16;
  Rng rng(1234);
  std::vector<std::size_t> excluded;
  std::vector<char> taken(m, 0);
  while (excluded.size() < observed) {
    const std::size_t j = rng.uniform_index(m);
    if (!taken[j]) {
      taken[j] = 1;
      excluded.push_back(j);
    }
  }
  std::vector<std::size_t> hidden;
  while (hidden.size() < n_mask) {
    const std::size_t j = rng.uniform_index(m);
    if (!taken[j]) {
      taken[j] = 1;
      hidden.push_back(j);
    }
  }
  std::sort(hidden.begin(), hidden.end());

  double recall_sum = 0.0;
  const int draws = 200;
  for (int d = 0; d < draws; ++d) {
    std::vector<double> scores(m);
    for (double& v : scores) v = rng.uniform01();
    std::size_t hits = 0;
    for (const std::size_t item : top_n(scores, excluded, n_mask)) {
      if (std::binary_search(hidden.begin(), hidden.end(), item)) ++hits;
    }
    recall_sum += static_cast<double>(hits) / n_mask;
  }
  CHECK(recall_sum / draws < 0.1);
}

TEST_CASE("average_runs") {
  EvalReport a;
  a.n_mask = 2;
  a.curve = {{1, 0.5, 0.25}, {2, 0.2, 0.2}, {3, 0.1, 0.3}, {4, 0.05, 0.4}};
  a.f1_at_nmask = 0.2;

  // Averaging identical reports changes nothing but the counter.
  const EvalReport same = average_runs({a, a, a});
  CHECK(same.runs_averaged == 3);
  CHECK(same.f1_at_nmask == doctest::Approx(0.2));
  for (std::size_t i = 0; i < a.curve.size(); ++i) {
    CHECK(same.curve[i].precision == doctest::Approx(a.curve[i].precision));
    CHECK(same.curve[i].recall == doctest::Approx(a.curve[i].recall));
  }

  EvalReport b = a;
  b.f1_at_nmask = 0.4;
  CHECK(average_runs({a, b}).f1_at_nmask == doctest::Approx(0.3));
  CHECK(average_runs({b, a}).f1_at_nmask == doctest::Approx(0.3));

  EvalReport wrong = a;
  wrong.curve.pop_back();
  CHECK_THROWS_AS(average_runs({a, wrong}), InputError);
}
