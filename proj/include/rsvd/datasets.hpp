#ifndef RSVD_DATASETS_HPP
#define RSVD_DATASETS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsvd/observed_matrix.hpp"

namespace rsvd {

struct Provenance {
  std::string format;
  /// Original user index per compacted index; empty means identity.
  std::vector<std::size_t> original_user_ids;
  std::size_t duplicates_dropped = 0;
};

/// Raw rating records with 0-based indices.
struct RatingTriples {
  std::size_t n_users = 0;
  std::size_t m_items = 0;
  std::vector<Rating> triples;
  Provenance provenance;
};

struct DatasetStats {
  std::size_t n_users = 0;
  std::size_t m_items = 0;
  std::size_t n_ratings = 0;
  double mean_ratings_per_user = 0.0;
};

DatasetStats compute_stats(const RatingTriples& triples);
DatasetStats compute_stats(const ObservedMatrix& matrix);

/// Native MovieLens 100K format: tab-separated `user item rating timestamp`
/// with 1-indexed IDs. Duplicate (user, item) pairs keep the last value and
/// bump provenance.duplicates_dropped.
RatingTriples load_movielens_100k(const std::string& path);

enum class CsvLayout {
  triples,  // rows of user,item,rating
  grid,     // one user per row, sentinel-marked missing cells
};
enum class IndexBase { zero, one };

/// Header-free CSV reader for the generic formats. In grid layout, cells
/// equal to missing_sentinel are dropped (the dense-rating convention uses
/// 99). index_base applies to triple layout only.
RatingTriples load_csv_triples(const std::string& path, CsvLayout layout,
                               std::optional<double> missing_sentinel = 99.0,
                               IndexBase index_base = IndexBase::zero);

/// Keeps users whose rating count lies within the optional bounds and
/// compacts user indices; the old indices land in provenance.
RatingTriples filter_users_by_rating_count(const RatingTriples& triples,
                                           std::optional<std::size_t> min,
                                           std::optional<std::size_t> max);

/// Every observed entry becomes 1.0; the index set is unchanged.
ObservedMatrix binarize(const RatingTriples& triples);

/// Which ratings get hidden: per selected user, n_mask of their rated items
/// sampled without replacement.
struct MaskPlan {
  std::size_t threshold_t = 0;
  std::size_t n_mask = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> selected_users;
  std::map<std::size_t, std::vector<std::size_t>> masked;  // sorted items
};

struct MaskedDataset {
  ObservedMatrix train;
  std::map<std::size_t, std::vector<std::size_t>> ground_truth;
  DatasetStats stats;  // of the source matrix, before masking
};

/// Selects users with strictly more than threshold_t ratings and samples
/// their masked sets. Deterministic per seed.
MaskPlan make_mask_plan(const ObservedMatrix& matrix, std::size_t threshold_t,
                        std::size_t n_mask, std::uint64_t seed);

MaskedDataset apply_mask_plan(const ObservedMatrix& matrix,
                              const MaskPlan& plan);

/// make_mask_plan followed by apply_mask_plan.
MaskedDataset mask_out(const ObservedMatrix& matrix, std::size_t threshold_t,
                       std::size_t n_mask, std::uint64_t seed);

}  // namespace rsvd

#endif
