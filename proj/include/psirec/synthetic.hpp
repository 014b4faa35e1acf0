#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "psirec/dataset.hpp"

namespace psirec {

/// Block-structured interaction generator. Users and items are dealt
/// round-robin into `communities` groups; each (user, item) cell is an edge
/// with probability p_in (same group) or p_out (different groups), scaled by an
/// item popularity weight (1 + rank)^-popularity_skew where rank is the item's
/// position inside its group. Each user then keeps a uniform sample of
/// 1 + Poisson(mean_interactions - 1) of its edges.
struct SyntheticConfig {
  std::size_t users = 500;
  std::size_t items = 500;
  std::size_t communities = 10;
  double p_in = 1.0;
  double p_out = 0.0125;
  double popularity_skew = 0.0;
  double mean_interactions = 5.0;
  double activity_spread = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Keys are "u<index>" and "i<index>"; the result is sorted and duplicate-free.
std::vector<KeyPair> generate_synthetic(const SyntheticConfig& cfg);

/// "user,item,value" CSV with a header row, value always 1.
void write_synthetic_csv(std::ostream& out, std::span<const KeyPair> pairs);

}  // namespace psirec
