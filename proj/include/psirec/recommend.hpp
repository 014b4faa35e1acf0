#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "psirec/dataset.hpp"
#include "psirec/factorization.hpp"

namespace psirec {

struct ScoredItem {
  std::uint32_t item = 0;
  double score = 0.0;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

struct RankedList {
  std::uint32_t user = 0;
  std::vector<ScoredItem> items;  // best first

  friend bool operator==(const RankedList&, const RankedList&) = default;
};

/// Fills `scores` (one slot per item) for `user`. Must be safe to call
/// concurrently for different users.
using Scorer = std::function<void(std::uint32_t user, std::span<double> scores)>;

/// The `k` best unmasked items, highest score first, ties by ascending item
/// index. NaN scores rank last.
RankedList top_k(std::uint32_t user, std::span<const double> scores, std::size_t k,
                 std::span<const std::uint32_t> mask);

/// Training popularity of every item.
std::vector<double> item_pop_scores(std::span<const Interaction> train, std::size_t num_items);

Scorer factor_scorer(const FactorModel& model);
Scorer popularity_scorer(std::vector<double> scores);

/// One list per user 0..num_users-1; with `mask_train` each user's training
/// items are excluded. Users are ranked in parallel.
std::vector<RankedList> recommend_all(const Scorer& scorer, std::size_t num_users, std::size_t num_items,
                                      std::span<const Interaction> train, std::size_t k, bool mask_train);
std::vector<RankedList> recommend_all_serial(const Scorer& scorer, std::size_t num_users, std::size_t num_items,
                                             std::span<const Interaction> train, std::size_t k,
                                             bool mask_train);

/// "u<TAB>rank<TAB>i<TAB>score" lines, rank starting at 1. A leading
/// "recommendations<TAB>M" line records the user count so empty lists survive.
void write_recommendations(std::ostream& out, std::span<const RankedList> lists);
std::vector<RankedList> read_recommendations(std::istream& in);

}  // namespace psirec
