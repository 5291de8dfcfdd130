#include "rsvd/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

#include "rsvd/errors.hpp"

namespace rsvd {

std::vector<std::size_t> top_n(std::span<const double> scores,
                               const std::vector<std::size_t>& excluded,
                               std::size_t n) {
  const std::size_t m = scores.size();
  std::vector<char> out_of_pool(m, 0);
  for (const std::size_t e : excluded) {
    if (e >= m) throw InputError("top_n: excluded item out of range");
    out_of_pool[e] = 1;
  }
  std::vector<std::size_t> pool;
  pool.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!out_of_pool[j]) pool.push_back(j);
  }
  if (n < 1 || n > pool.size()) {
    throw InputError("top_n: n = " + std::to_string(n) +
                     " exceeds candidate pool of " +
                     std::to_string(pool.size()));
  }
  const auto better = [&](std::size_t a, std::size_t b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  };
  std::partial_sort(pool.begin(), pool.begin() + n, pool.end(), better);
  pool.resize(n);
  return pool;
}

TopNResult top_n_result(std::size_t user, std::span<const double> scores,
                        const std::vector<std::size_t>& excluded,
                        const std::vector<std::size_t>& truth_sorted,
                        std::size_t n) {
  TopNResult result;
  result.user = user;
  result.top_items = top_n(scores, excluded, n);
  for (const std::size_t item : result.top_items) {
    if (std::binary_search(truth_sorted.begin(), truth_sorted.end(), item)) {
      ++result.hit_count;
    }
  }
  return result;
}

std::pair<double, double> precision_recall(std::size_t hits, std::size_t n,
                                           std::size_t n_mask) {
  if (n == 0 || n_mask == 0) {
    throw InputError("precision_recall: n and n_mask must be positive");
  }
  if (hits > std::min(n, n_mask)) {
    throw InputError("precision_recall: hits exceed min(n, n_mask)");
  }
  return {static_cast<double>(hits) / static_cast<double>(n),
          static_cast<double>(hits) / static_cast<double>(n_mask)};
}

double f1_measure(double precision, double recall) {
  if (precision < 0.0 || precision > 1.0 || recall < 0.0 || recall > 1.0) {
    throw InputError("f1_measure: arguments must lie in [0, 1]");
  }
  const double sum = precision + recall;
  if (sum == 0.0) return 0.0;
  return 2.0 * precision * recall / sum;
}

EvalReport evaluate(const CompletionResult& result,
                    const MaskedDataset& masked) {
  if (result.u.rows() != masked.train.n_users() ||
      result.v.rows() != masked.train.m_items()) {
    throw InputError("evaluate: model dimensions disagree with the dataset");
  }
  if (masked.ground_truth.empty()) {
    throw InputError("evaluate: no training users");
  }
  const std::size_t n_mask = masked.ground_truth.begin()->second.size();
  const std::size_t n_max = 2 * n_mask;
  const std::size_t m = masked.train.m_items();

  std::vector<double> precision_sum(n_max, 0.0);
  std::vector<double> recall_sum(n_max, 0.0);

  for (const auto& [user, truth] : masked.ground_truth) {
    if (truth.size() != n_mask) {
      throw InputError("evaluate: uneven mask sizes across users");
    }
    const std::vector<double> scores = predict_scores(result, user);
    std::vector<std::size_t> excluded;
    for (const Rating& e : masked.train.row(user)) {
      excluded.push_back(e.item);
    }
    if (excluded.size() >= m) {
      throw InputError("evaluate: user " + std::to_string(user) +
                       " has an empty candidate pool");
    }
    const std::size_t pool = m - excluded.size();
    const TopNResult ranked =
        top_n_result(user, scores, excluded, truth, std::min(n_max, pool));

    std::size_t hits = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      if (n <= ranked.top_items.size() &&
          std::binary_search(truth.begin(), truth.end(),
                             ranked.top_items[n - 1])) {
        ++hits;
      }
      const auto [p, r] = precision_recall(hits, n, n_mask);
      precision_sum[n - 1] += p;
      recall_sum[n - 1] += r;
    }
  }

  const double users = static_cast<double>(masked.ground_truth.size());
  EvalReport report;
  report.n_mask = n_mask;
  report.runs_averaged = 1;
  report.curve.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    report.curve.push_back(
        {n, precision_sum[n - 1] / users, recall_sum[n - 1] / users});
  }
  const PRPoint& at_mask = report.curve[n_mask - 1];
  report.f1_at_nmask = f1_measure(at_mask.precision, at_mask.recall);
  return report;
}

EvalReport average_runs(const std::vector<EvalReport>& reports) {
  if (reports.empty()) {
    throw InputError("average_runs: no reports");
  }
  const EvalReport& first = reports.front();
  EvalReport out;
  out.n_mask = first.n_mask;
  out.curve.resize(first.curve.size());
  for (std::size_t i = 0; i < out.curve.size(); ++i) {
    out.curve[i].n = first.curve[i].n;
  }
  out.runs_averaged = 0;
  double f1 = 0.0;
  for (const EvalReport& r : reports) {
    if (r.n_mask != out.n_mask || r.curve.size() != out.curve.size()) {
      throw InputError("average_runs: report shapes disagree");
    }
    const double w = static_cast<double>(r.runs_averaged);
    for (std::size_t i = 0; i < out.curve.size(); ++i) {
      out.curve[i].precision += w * r.curve[i].precision;
      out.curve[i].recall += w * r.curve[i].recall;
    }
    f1 += w * r.f1_at_nmask;
    out.runs_averaged += r.runs_averaged;
  }
  const double total = static_cast<double>(out.runs_averaged);
  for (PRPoint& p : out.curve) {
    p.precision /= total;
    p.recall /= total;
  }
  out.f1_at_nmask = f1 / total;
  return out;
}

namespace {
std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}
}  // namespace

void write_pr_curve_csv(const EvalReport& report, std::ostream& out,
                        const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "N,precision,recall\n";
  for (const PRPoint& p : report.curve) {
    out << p.n << ',' << fmt6(p.precision) << ',' << fmt6(p.recall) << '\n';
  }
}

void write_f1_summary(const EvalReport& report, std::ostream& out) {
  out << "f1_at_nmask=" << fmt6(report.f1_at_nmask) << '\n'
      << "n_mask=" << report.n_mask << '\n'
      << "runs_averaged=" << report.runs_averaged << '\n';
}

}  // namespace rsvd
