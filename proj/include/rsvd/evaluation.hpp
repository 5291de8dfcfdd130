#ifndef RSVD_EVALUATION_HPP
#define RSVD_EVALUATION_HPP

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "rsvd/completion.hpp"
#include "rsvd/datasets.hpp"

namespace rsvd {

struct TopNResult {
  std::size_t user = 0;
  std::vector<std::size_t> top_items;
  std::size_t hit_count = 0;
};

struct PRPoint {
  std::size_t n = 0;
  double precision = 0.0;
  double recall = 0.0;
};

/// Precision-recall curve over N = 1 .. 2 n_mask, macro-averaged across
/// users, plus the harmonic-mean summary at N = n_mask.
struct EvalReport {
  std::vector<PRPoint> curve;
  double f1_at_nmask = 0.0;
  std::size_t runs_averaged = 1;
  std::size_t n_mask = 0;
};

/// The n highest-scoring items not in `excluded`, descending by score with
/// ties broken by ascending item index.
std::vector<std::size_t> top_n(std::span<const double> scores,
                               const std::vector<std::size_t>& excluded,
                               std::size_t n);

/// top_n plus the hit count against a sorted ground-truth item set.
TopNResult top_n_result(std::size_t user, std::span<const double> scores,
                        const std::vector<std::size_t>& excluded,
                        const std::vector<std::size_t>& truth_sorted,
                        std::size_t n);

/// recall = hits / n_mask, precision = hits / n.
std::pair<double, double> precision_recall(std::size_t hits, std::size_t n,
                                           std::size_t n_mask);

/// 2PR/(P+R), defined as 0 when both are 0.
double f1_measure(double precision, double recall);

/// Scores every training user's candidates (items they rated in the
/// training matrix are excluded) and averages hit rates per N.
EvalReport evaluate(const CompletionResult& result,
                    const MaskedDataset& masked);

/// Pointwise mean across runs of the same shape.
EvalReport average_runs(const std::vector<EvalReport>& reports);

/// CSV serialization: header `N,precision,recall`, 6 significant digits.
void write_pr_curve_csv(const EvalReport& report, std::ostream& out,
                        const std::string& comment = "");

/// Key-value summary block for the F1 figure.
void write_f1_summary(const EvalReport& report, std::ostream& out);

}  // namespace rsvd

#endif
