#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "psirec/walks.hpp"

namespace psirec {

struct PairCount {
  std::uint32_t user = 0;
  std::uint32_t item = 0;
  std::uint64_t count = 0;

  friend bool operator==(const PairCount&, const PairCount&) = default;
};

/// Statistics of the sampled (user, item) multiset: #(u,i), #(u), #(i) and |C|.
class PairCorpusStats {
 public:
  PairCorpusStats() = default;
  PairCorpusStats(std::size_t num_users, std::size_t num_items);

  /// Builds marginals from per-pair counts. `pairs` may be unsorted and may
  /// repeat a pair; repeated entries are summed.
  static PairCorpusStats from_counts(std::size_t num_users, std::size_t num_items,
                                     std::vector<PairCount> pairs);

  std::size_t num_users() const noexcept { return user_count_.size(); }
  std::size_t num_items() const noexcept { return item_count_.size(); }

  /// Non-zero pair counts sorted by (user, item).
  std::span<const PairCount> pairs() const noexcept { return pairs_; }
  std::uint64_t pair_count(std::uint32_t user, std::uint32_t item) const;
  std::uint64_t user_count(std::uint32_t user) const { return user_count_.at(user); }
  std::uint64_t item_count(std::uint32_t item) const { return item_count_.at(item); }
  std::span<const std::uint64_t> user_counts() const noexcept { return user_count_; }
  std::span<const std::uint64_t> item_counts() const noexcept { return item_count_; }
  std::uint64_t total() const noexcept { return total_; }

  /// True when both marginals sum the pair counts and agree on |C|.
  bool marginals_consistent() const;

  friend bool operator==(const PairCorpusStats&, const PairCorpusStats&) = default;

 private:
  std::vector<PairCount> pairs_;
  std::vector<std::uint64_t> user_count_;
  std::vector<std::uint64_t> item_count_;
  std::uint64_t total_ = 0;
};

/// Window extraction over the walk corpus: for every user position j, the
/// vertices at offsets j-sigma, j-sigma+2, ..., j+sigma (j itself excluded,
/// positions outside the walk clipped) are paired with it. `sigma` must be odd,
/// which makes every partner an item. Throws if a walk does not alternate kinds
/// or references a vertex outside (num_users, num_items).
PairCorpusStats sample_pairs(const WalkCorpus& corpus, std::size_t sigma, std::size_t num_users,
                             std::size_t num_items);

/// Single-threaded reference for sample_pairs.
PairCorpusStats sample_pairs_serial(const WalkCorpus& corpus, std::size_t sigma, std::size_t num_users,
                                    std::size_t num_items);

PairCorpusStats merge(const PairCorpusStats& a, const PairCorpusStats& b);

/// Header "pairs<TAB>M<TAB>N<TAB>|C|", then one "u<TAB>i<TAB>count" line per pair.
void write_stats(std::ostream& out, const PairCorpusStats& stats);
PairCorpusStats read_stats(std::istream& in);

}  // namespace psirec
