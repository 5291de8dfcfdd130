#include "rsvd/datasets.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>
#include <unordered_map>

#include "rsvd/errors.hpp"
#include "rsvd/matrix_csv.hpp"
#include "rsvd/rng.hpp"

namespace rsvd {

namespace {

// Keyed (user, item) -> position in the triple list, for keep-last
// duplicate handling.
struct PairHash {
  std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const {
    return p.first * 1000003u ^ p.second;
  }
};

std::vector<Rating> dedupe_keep_last(std::vector<Rating> raw,
                                     std::size_t* dropped) {
  std::unordered_map<std::pair<std::size_t, std::size_t>, std::size_t,
                     PairHash>
      seen;
  seen.reserve(raw.size());
  std::vector<Rating> out;
  out.reserve(raw.size());
  *dropped = 0;
  for (const Rating& r : raw) {
    auto [it, inserted] = seen.try_emplace({r.user, r.item}, out.size());
    if (inserted) {
      out.push_back(r);
    } else {
      out[it->second].value = r.value;
      ++*dropped;
    }
  }
  return out;
}

long long parse_ll(std::string_view body, const std::string& where) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
    throw ParseError(where + ": not an integer: '" + std::string(body) + "'");
  }
  return value;
}

double parse_double(std::string_view body, const std::string& where) {
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(body.data(), body.data() + body.size(), value);
  if (ec != std::errc() || ptr != body.data() + body.size() || body.empty()) {
    throw ParseError(where + ": not a number: '" + std::string(body) + "'");
  }
  return value;
}

std::size_t integral_index(double v, const std::string& where) {
  const double r = std::round(v);
  if (!std::isfinite(v) || std::abs(v - r) > 1e-9 || r < 0.0) {
    throw ParseError(where + ": not a valid index: " + std::to_string(v));
  }
  return static_cast<std::size_t>(r);
}

}  // namespace

DatasetStats compute_stats(const RatingTriples& triples) {
  DatasetStats s;
  s.n_users = triples.n_users;
  s.m_items = triples.m_items;
  s.n_ratings = triples.triples.size();
  s.mean_ratings_per_user =
      triples.n_users == 0
          ? 0.0
          : static_cast<double>(s.n_ratings) / static_cast<double>(s.n_users);
  return s;
}

DatasetStats compute_stats(const ObservedMatrix& matrix) {
  DatasetStats s;
  s.n_users = matrix.n_users();
  s.m_items = matrix.m_items();
  s.n_ratings = matrix.size();
  s.mean_ratings_per_user = static_cast<double>(s.n_ratings) /
                            static_cast<double>(s.n_users);
  return s;
}

RatingTriples load_movielens_100k(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open");
  }
  std::vector<Rating> raw;
  std::string line;
  std::size_t line_no = 0;
  std::size_t max_user = 0, max_item = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    std::array<std::string_view, 4> fields;
    std::string_view rest = line;
    for (int f = 0; f < 4; ++f) {
      const std::size_t tab = rest.find('\t');
      if (f < 3 && tab == std::string_view::npos) {
        throw ParseError(where + ": expected 4 tab-separated fields");
      }
      fields[f] = tab == std::string_view::npos ? rest : rest.substr(0, tab);
      rest = tab == std::string_view::npos ? std::string_view{}
                                           : rest.substr(tab + 1);
    }
    const long long user = parse_ll(fields[0], where);
    const long long item = parse_ll(fields[1], where);
    if (user < 1 || item < 1) {
      throw ParseError(where + ": IDs are 1-indexed");
    }
    const double rating = parse_double(fields[2], where);
    parse_ll(fields[3], where);  // timestamp: validated, discarded
    raw.push_back({static_cast<std::size_t>(user - 1),
                   static_cast<std::size_t>(item - 1), rating});
    max_user = std::max(max_user, static_cast<std::size_t>(user));
    max_item = std::max(max_item, static_cast<std::size_t>(item));
  }
  if (raw.empty()) {
    throw ParseError(path + ": no ratings");
  }
  RatingTriples out;
  out.provenance.format = "movielens";
  out.triples = dedupe_keep_last(std::move(raw),
                                 &out.provenance.duplicates_dropped);
  out.n_users = max_user;
  out.m_items = max_item;
  return out;
}

RatingTriples load_csv_triples(const std::string& path, CsvLayout layout,
                               std::optional<double> missing_sentinel,
                               IndexBase index_base) {
  const DenseMatrix cells = read_matrix_csv(path);
  RatingTriples out;
  std::vector<Rating> raw;
  if (layout == CsvLayout::grid) {
    out.provenance.format = "grid";
    out.n_users = cells.rows();
    out.m_items = cells.cols();
    for (std::size_t i = 0; i < cells.rows(); ++i) {
      for (std::size_t j = 0; j < cells.cols(); ++j) {
        const double v = cells(i, j);
        if (missing_sentinel && v == *missing_sentinel) continue;
        raw.push_back({i, j, v});
      }
    }
    if (raw.empty()) {
      throw ParseError(path + ": every cell equals the missing sentinel");
    }
  } else {
    out.provenance.format = "triples";
    if (cells.cols() != 3) {
      throw ParseError(path + ": triple rows need exactly 3 columns, found " +
                       std::to_string(cells.cols()));
    }
    const std::size_t base = index_base == IndexBase::one ? 1 : 0;
    for (std::size_t r = 0; r < cells.rows(); ++r) {
      const std::string where = path + ": row " + std::to_string(r + 1);
      const std::size_t user = integral_index(cells(r, 0), where);
      const std::size_t item = integral_index(cells(r, 1), where);
      if (user < base || item < base) {
        throw ParseError(where + ": index below the declared base");
      }
      raw.push_back({user - base, item - base, cells(r, 2)});
      out.n_users = std::max(out.n_users, user - base + 1);
      out.m_items = std::max(out.m_items, item - base + 1);
    }
  }
  out.triples = dedupe_keep_last(std::move(raw),
                                 &out.provenance.duplicates_dropped);
  return out;
}

RatingTriples filter_users_by_rating_count(const RatingTriples& triples,
                                           std::optional<std::size_t> min,
                                           std::optional<std::size_t> max) {
  std::vector<std::size_t> counts(triples.n_users, 0);
  for (const Rating& r : triples.triples) ++counts[r.user];

  std::vector<std::size_t> remap(triples.n_users, SIZE_MAX);
  RatingTriples out;
  out.m_items = triples.m_items;
  out.provenance.format = triples.provenance.format;
  out.provenance.duplicates_dropped = triples.provenance.duplicates_dropped;
  for (std::size_t u = 0; u < triples.n_users; ++u) {
    if (min && counts[u] < *min) continue;
    if (max && counts[u] > *max) continue;
    remap[u] = out.n_users++;
    const std::size_t original = triples.provenance.original_user_ids.empty()
                                     ? u
                                     : triples.provenance.original_user_ids[u];
    out.provenance.original_user_ids.push_back(original);
  }
  if (out.n_users == 0) {
    throw InputError("filter_users_by_rating_count: no users survive");
  }
  for (const Rating& r : triples.triples) {
    if (remap[r.user] != SIZE_MAX) {
      out.triples.push_back({remap[r.user], r.item, r.value});
    }
  }
  return out;
}

ObservedMatrix binarize(const RatingTriples& triples) {
  std::vector<Rating> entries;
  entries.reserve(triples.triples.size());
  for (const Rating& r : triples.triples) {
    entries.push_back({r.user, r.item, 1.0});
  }
  return {triples.n_users, triples.m_items, std::move(entries)};
}

MaskPlan make_mask_plan(const ObservedMatrix& matrix, std::size_t threshold_t,
                        std::size_t n_mask, std::uint64_t seed) {
  if (n_mask == 0) {
    throw InputError("make_mask_plan: n_mask must be positive");
  }
  MaskPlan plan;
  plan.threshold_t = threshold_t;
  plan.n_mask = n_mask;
  plan.seed = seed;
  for (std::size_t u = 0; u < matrix.n_users(); ++u) {
    if (matrix.row(u).size() > threshold_t) plan.selected_users.push_back(u);
  }
  if (plan.selected_users.empty()) {
    throw InputError("make_mask_plan: no training users above threshold " +
                     std::to_string(threshold_t));
  }
  Rng rng(seed);
  for (const std::size_t u : plan.selected_users) {
    const auto row = matrix.row(u);
    if (row.size() < n_mask) {
      throw InputError("make_mask_plan: user " + std::to_string(u) +
                       " has fewer than n_mask ratings");
    }
    std::vector<std::size_t> items;
    items.reserve(row.size());
    for (const Rating& r : row) items.push_back(r.item);
    // Partial Fisher-Yates: the first n_mask slots become the sample.
    for (std::size_t j = 0; j < n_mask; ++j) {
      const std::size_t pick = j + rng.uniform_index(items.size() - j);
      std::swap(items[j], items[pick]);
    }
    items.resize(n_mask);
    std::sort(items.begin(), items.end());
    plan.masked.emplace(u, std::move(items));
  }
  return plan;
}

MaskedDataset apply_mask_plan(const ObservedMatrix& matrix,
                              const MaskPlan& plan) {
  std::vector<Rating> train_entries;
  train_entries.reserve(matrix.size());
  for (const Rating& e : matrix.entries()) {
    const auto it = plan.masked.find(e.user);
    if (it != plan.masked.end() &&
        std::binary_search(it->second.begin(), it->second.end(), e.item)) {
      continue;
    }
    train_entries.push_back(e);
  }
  if (train_entries.empty()) {
    throw InputError("apply_mask_plan: masking removed every entry");
  }
  return {ObservedMatrix(matrix.n_users(), matrix.m_items(),
                         std::move(train_entries)),
          plan.masked, compute_stats(matrix)};
}

MaskedDataset mask_out(const ObservedMatrix& matrix, std::size_t threshold_t,
                       std::size_t n_mask, std::uint64_t seed) {
  return apply_mask_plan(matrix,
                         make_mask_plan(matrix, threshold_t, n_mask, seed));
}

}  // namespace rsvd
