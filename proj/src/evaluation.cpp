#include "psirec/evaluation.hpp"

#include <algorithm>
#include <string>

#include "psirec/error.hpp"

namespace psirec {

const CutoffMetrics& MetricsReport::at(std::size_t k) const {
  for (const auto& c : cutoffs) {
    if (c.k == k) return c;
  }
  throw Error("no metrics for cutoff " + std::to_string(k));
}

UserMetrics score_user(const RankedList& list, std::span<const std::uint32_t> relevant, std::size_t k) {
  if (k < 1) throw Error("cutoff must be >= 1");
  UserMetrics m;
  m.relevant = relevant.size();
  const auto depth = std::min(k, list.items.size());
  for (std::size_t r = 0; r < depth; ++r) {
    if (std::binary_search(relevant.begin(), relevant.end(), list.items[r].item)) ++m.hits;
  }
  m.at.k = k;
  m.at.precision = static_cast<double>(m.hits) / static_cast<double>(k);
  m.at.recall = m.relevant > 0 ? static_cast<double>(m.hits) / static_cast<double>(m.relevant) : 0.0;
  const double sum = m.at.precision + m.at.recall;
  m.at.f1 = sum > 0.0 ? 2.0 * m.at.precision * m.at.recall / sum : 0.0;
  return m;
}

std::vector<std::vector<UserMetrics>> per_user_metrics(std::span<const RankedList> recs,
                                                       std::span<const Interaction> test_in, std::size_t num_users,
                                                       std::span<const std::size_t> cutoffs) {
  if (cutoffs.empty()) throw Error("at least one cutoff is required");
  if (recs.size() != num_users) {
    throw Error("expected recommendation lists for " + std::to_string(num_users) + " users, got " +
                std::to_string(recs.size()));
  }
  for (std::size_t u = 0; u < num_users; ++u) {
    if (recs[u].user != u) throw Error("missing recommendation list for user " + std::to_string(u));
  }
  Interactions test(test_in.begin(), test_in.end());
  normalize(test);
  std::vector<std::size_t> offsets(num_users + 1, 0);
  std::vector<std::uint32_t> items;
  items.reserve(test.size());
  for (const auto& [u, i] : test) {
    if (u >= num_users) throw Error("test user index out of range");
    ++offsets[u + 1];
    items.push_back(i);
  }
  for (std::size_t u = 0; u < num_users; ++u) offsets[u + 1] += offsets[u];

  std::vector<std::vector<UserMetrics>> out(num_users);
  const auto users = static_cast<std::ptrdiff_t>(num_users);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t u = 0; u < users; ++u) {
    const auto uu = static_cast<std::size_t>(u);
    const std::span<const std::uint32_t> relevant(items.data() + offsets[uu], offsets[uu + 1] - offsets[uu]);
    auto& row = out[uu];
    row.reserve(cutoffs.size());
    for (auto k : cutoffs) row.push_back(score_user(recs[uu], relevant, k));
  }
  return out;
}

MetricsReport evaluate(std::span<const RankedList> recs, std::span<const Interaction> test, std::size_t num_users,
                       std::span<const std::size_t> cutoffs) {
  for (auto k : cutoffs) {
    if (k < 1) throw Error("cutoff must be >= 1");
  }
  const auto per_user = per_user_metrics(recs, test, num_users, cutoffs);
  MetricsReport report;
  report.user_count = num_users;
  for (std::size_t c = 0; c < cutoffs.size(); ++c) {
    CutoffMetrics mean{cutoffs[c], 0.0, 0.0, 0.0};
    // Summed in user order so the result does not depend on the thread count.
    for (const auto& row : per_user) {
      mean.precision += row[c].at.precision;
      mean.recall += row[c].at.recall;
      mean.f1 += row[c].at.f1;
    }
    if (num_users > 0) {
      const auto n = static_cast<double>(num_users);
      mean.precision /= n;
      mean.recall /= n;
      mean.f1 /= n;
    }
    report.cutoffs.push_back(mean);
  }
  return report;
}

}  // namespace psirec
