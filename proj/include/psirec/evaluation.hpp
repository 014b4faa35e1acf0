#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "psirec/dataset.hpp"
#include "psirec/recommend.hpp"

namespace psirec {

struct CutoffMetrics {
  std::size_t k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Metrics of a single user at one cutoff, with the raw hit count.
struct UserMetrics {
  std::size_t hits = 0;
  std::size_t relevant = 0;
  CutoffMetrics at;
};

struct MetricsReport {
  std::size_t user_count = 0;
  std::vector<CutoffMetrics> cutoffs;  // means over all users

  const CutoffMetrics& at(std::size_t k) const;
};

/// precision = hits/k, recall = hits/|test_u| (0 when the user has no test
/// items), F1 = 2PR/(P+R) (0 when P+R = 0). `relevant` must be sorted.
UserMetrics score_user(const RankedList& list, std::span<const std::uint32_t> relevant, std::size_t k);

/// Per-user metrics, indexed [user][cutoff]. Requires exactly one list per
/// user, in user order.
std::vector<std::vector<UserMetrics>> per_user_metrics(std::span<const RankedList> recs,
                                                       std::span<const Interaction> test, std::size_t num_users,
                                                       std::span<const std::size_t> cutoffs);

/// Averages over every user, including users without test interactions.
MetricsReport evaluate(std::span<const RankedList> recs, std::span<const Interaction> test,
                       std::size_t num_users, std::span<const std::size_t> cutoffs);

}  // namespace psirec
