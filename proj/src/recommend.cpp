#include "psirec/recommend.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "psirec/error.hpp"
#include "psirec/text_io.hpp"

namespace psirec {

RankedList top_k(std::uint32_t user, std::span<const double> scores, std::size_t k,
                 std::span<const std::uint32_t> mask) {
  if (k < 1) throw Error("top-k cutoff must be >= 1");
  std::vector<char> masked(scores.size(), 0);
  for (auto i : mask) {
    if (i < masked.size()) masked[i] = 1;
  }
  std::vector<std::uint32_t> candidates;
  candidates.reserve(scores.size());
  for (std::uint32_t i = 0; i < scores.size(); ++i) {
    if (!masked[i]) candidates.push_back(i);
  }
  auto key = [&](std::uint32_t i) {
    return std::isnan(scores[i]) ? -std::numeric_limits<double>::infinity() : scores[i];
  };
  auto better = [&](std::uint32_t a, std::uint32_t b) {
    const double ka = key(a), kb = key(b);
    return ka > kb || (ka == kb && a < b);
  };
  const auto take = std::min(k, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(take), candidates.end(),
                    better);
  RankedList list{user, {}};
  list.items.reserve(take);
  for (std::size_t r = 0; r < take; ++r) list.items.push_back({candidates[r], scores[candidates[r]]});
  return list;
}

std::vector<double> item_pop_scores(std::span<const Interaction> train, std::size_t num_items) {
  Interactions edges(train.begin(), train.end());
  normalize(edges);
  std::vector<double> scores(num_items, 0.0);
  for (const auto& [u, i] : edges) {
    if (i >= num_items) throw Error("item index out of range");
    scores[i] += 1.0;
  }
  return scores;
}

Scorer factor_scorer(const FactorModel& model) {
  return [&model](std::uint32_t user, std::span<double> scores) {
    Eigen::Map<Eigen::VectorXd> out(scores.data(), static_cast<Eigen::Index>(scores.size()));
    out.noalias() = model.item_factors * model.user_factors.row(user).transpose();
  };
}

Scorer popularity_scorer(std::vector<double> popularity) {
  return [pop = std::move(popularity)](std::uint32_t, std::span<double> scores) {
    std::copy(pop.begin(), pop.end(), scores.begin());
  };
}

namespace {

struct UserMasks {
  std::vector<std::size_t> offsets;
  Interactions edges;

  UserMasks(std::span<const Interaction> train, std::size_t num_users, bool enabled) : offsets(num_users + 1, 0) {
    if (!enabled) return;
    edges.assign(train.begin(), train.end());
    normalize(edges);
    for (const auto& [u, i] : edges) {
      if (u >= num_users) throw Error("training user index out of range");
      ++offsets[u + 1];
    }
    for (std::size_t u = 0; u < num_users; ++u) offsets[u + 1] += offsets[u];
  }

  std::vector<std::uint32_t> items(std::uint32_t user) const {
    std::vector<std::uint32_t> out;
    for (auto e = offsets[user]; e < offsets[user + 1]; ++e) out.push_back(edges[e].second);
    return out;
  }
};

std::vector<RankedList> recommend(const Scorer& scorer, std::size_t num_users, std::size_t num_items,
                                  std::span<const Interaction> train, std::size_t k, bool mask_train,
                                  bool parallel) {
  if (k < 1) throw Error("k_items must be >= 1");
  const UserMasks masks(train, num_users, mask_train);
  std::vector<RankedList> lists(num_users);
  const auto users = static_cast<std::ptrdiff_t>(num_users);
#pragma omp parallel if (parallel)
  {
    std::vector<double> scores(num_items);
#pragma omp for schedule(static)
    for (std::ptrdiff_t u = 0; u < users; ++u) {
      const auto user = static_cast<std::uint32_t>(u);
      scorer(user, scores);
      lists[static_cast<std::size_t>(u)] = top_k(user, scores, k, masks.items(user));
    }
  }
  return lists;
}

}  // namespace

std::vector<RankedList> recommend_all(const Scorer& scorer, std::size_t num_users, std::size_t num_items,
                                      std::span<const Interaction> train, std::size_t k, bool mask_train) {
  return recommend(scorer, num_users, num_items, train, k, mask_train, true);
}

std::vector<RankedList> recommend_all_serial(const Scorer& scorer, std::size_t num_users, std::size_t num_items,
                                             std::span<const Interaction> train, std::size_t k,
                                             bool mask_train) {
  return recommend(scorer, num_users, num_items, train, k, mask_train, false);
}

void write_recommendations(std::ostream& out, std::span<const RankedList> lists) {
  out << "recommendations\t" << lists.size() << '\n';
  for (const auto& list : lists) {
    for (std::size_t r = 0; r < list.items.size(); ++r) {
      out << list.user << '\t' << (r + 1) << '\t' << list.items[r].item << '\t'
          << format_double(list.items[r].score) << '\n';
    }
  }
}

std::vector<RankedList> read_recommendations(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty recommendations file");
  const auto h = split_fields(line, '\t');
  if (h.size() != 2 || h[0] != "recommendations") throw ParseError(1, "expected 'recommendations<TAB>M'");
  const auto users = parse_uint(h[1], 1);
  std::vector<RankedList> lists(users);
  for (std::uint32_t u = 0; u < users; ++u) lists[u].user = u;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_fields(line, '\t');
    if (f.size() != 4) throw ParseError(lineno, "expected 'u<TAB>rank<TAB>i<TAB>score'");
    const auto u = parse_uint(f[0], lineno);
    const auto rank = parse_uint(f[1], lineno);
    if (u >= users) throw ParseError(lineno, "user index out of range");
    auto& items = lists[u].items;
    if (rank != items.size() + 1) throw ParseError(lineno, "ranks must be consecutive from 1");
    items.push_back({static_cast<std::uint32_t>(parse_uint(f[2], lineno)), parse_double(f[3], lineno)});
  }
  return lists;
}

}  // namespace psirec
