#include "psirec/pairs.hpp"

#include <omp.h>

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <unordered_map>

#include "psirec/error.hpp"
#include "psirec/text_io.hpp"

namespace psirec {

PairCorpusStats::PairCorpusStats(std::size_t num_users, std::size_t num_items)
    : user_count_(num_users, 0), item_count_(num_items, 0) {}

PairCorpusStats PairCorpusStats::from_counts(std::size_t num_users, std::size_t num_items,
                                             std::vector<PairCount> pairs) {
  PairCorpusStats s(num_users, num_items);
  std::sort(pairs.begin(), pairs.end(), [](const PairCount& a, const PairCount& b) {
    return std::tie(a.user, a.item) < std::tie(b.user, b.item);
  });
  for (const auto& p : pairs) {
    if (p.user >= num_users || p.item >= num_items) throw Error("pair index out of range");
    if (p.count == 0) continue;
    if (!s.pairs_.empty() && s.pairs_.back().user == p.user && s.pairs_.back().item == p.item) {
      s.pairs_.back().count += p.count;
    } else {
      s.pairs_.push_back(p);
    }
    s.user_count_[p.user] += p.count;
    s.item_count_[p.item] += p.count;
    s.total_ += p.count;
  }
  return s;
}

std::uint64_t PairCorpusStats::pair_count(std::uint32_t user, std::uint32_t item) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::pair{user, item},
                             [](const PairCount& p, const std::pair<std::uint32_t, std::uint32_t>& key) {
                               return std::tie(p.user, p.item) < std::tie(key.first, key.second);
                             });
  return (it != pairs_.end() && it->user == user && it->item == item) ? it->count : 0;
}

bool PairCorpusStats::marginals_consistent() const {
  std::vector<std::uint64_t> users(user_count_.size(), 0), items(item_count_.size(), 0);
  std::uint64_t total = 0;
  for (const auto& p : pairs_) {
    users[p.user] += p.count;
    items[p.item] += p.count;
    total += p.count;
  }
  std::uint64_t sum_users = 0, sum_items = 0;
  for (auto c : user_count_) sum_users += c;
  for (auto c : item_count_) sum_items += c;
  return users == user_count_ && items == item_count_ && total == total_ && sum_users == total_ &&
         sum_items == total_;
}

namespace {

using CountMap = std::unordered_map<std::uint64_t, std::uint64_t>;

void validate_corpus(const WalkCorpus& corpus, std::size_t sigma, std::size_t num_users,
                     std::size_t num_items) {
  if (sigma < 1 || sigma % 2 == 0) {
    throw Error("window size must be odd and >= 1 (got " + std::to_string(sigma) + ")");
  }
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    const auto walk = corpus.walk(w);
    for (std::size_t t = 0; t < walk.size(); ++t) {
      const auto limit = walk[t].is_user() ? num_users : num_items;
      if (walk[t].index >= limit) throw Error("walk " + std::to_string(w) + " references an unknown vertex");
      if (t > 0 && walk[t].kind == walk[t - 1].kind) {
        throw Error("walk " + std::to_string(w) + " does not alternate users and items at position " +
                    std::to_string(t));
      }
    }
  }
}

void count_walk(std::span<const Vertex> walk, std::size_t sigma, CountMap& counts) {
  const auto len = static_cast<std::ptrdiff_t>(walk.size());
  const auto s = static_cast<std::ptrdiff_t>(sigma);
  for (std::ptrdiff_t j = 0; j < len; ++j) {
    if (!walk[j].is_user()) continue;
    const std::uint64_t user_key = static_cast<std::uint64_t>(walk[j].index) << 32;
    for (std::ptrdiff_t k = j - s; k <= j + s; k += 2) {
      if (k < 0 || k >= len || k == j) continue;
      ++counts[user_key | walk[k].index];
    }
  }
}

std::vector<PairCount> to_pairs(const CountMap& counts) {
  std::vector<PairCount> out;
  out.reserve(counts.size());
  for (const auto& [key, c] : counts) {
    out.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key & 0xffffffffu), c});
  }
  return out;
}

}  // namespace

PairCorpusStats sample_pairs_serial(const WalkCorpus& corpus, std::size_t sigma, std::size_t num_users,
                                    std::size_t num_items) {
  validate_corpus(corpus, sigma, num_users, num_items);
  CountMap counts;
  for (std::size_t w = 0; w < corpus.size(); ++w) count_walk(corpus.walk(w), sigma, counts);
  return PairCorpusStats::from_counts(num_users, num_items, to_pairs(counts));
}

PairCorpusStats sample_pairs(const WalkCorpus& corpus, std::size_t sigma, std::size_t num_users,
                             std::size_t num_items) {
  validate_corpus(corpus, sigma, num_users, num_items);
  std::vector<std::optional<PairCorpusStats>> partial(static_cast<std::size_t>(omp_get_max_threads()));
  const auto n_walks = static_cast<std::ptrdiff_t>(corpus.size());
#pragma omp parallel
  {
    CountMap counts;
#pragma omp for schedule(static)
    for (std::ptrdiff_t w = 0; w < n_walks; ++w) count_walk(corpus.walk(static_cast<std::size_t>(w)), sigma, counts);
    partial[static_cast<std::size_t>(omp_get_thread_num())] =
        PairCorpusStats::from_counts(num_users, num_items, to_pairs(counts));
  }
  PairCorpusStats total(num_users, num_items);
  for (const auto& p : partial) {
    if (p) total = merge(total, *p);
  }
  return total;
}

PairCorpusStats merge(const PairCorpusStats& a, const PairCorpusStats& b) {
  if (a.num_users() != b.num_users() || a.num_items() != b.num_items()) {
    throw Error("cannot merge pair statistics of different dimensions");
  }
  std::vector<PairCount> all(a.pairs().begin(), a.pairs().end());
  all.insert(all.end(), b.pairs().begin(), b.pairs().end());
  return PairCorpusStats::from_counts(a.num_users(), a.num_items(), std::move(all));
}

void write_stats(std::ostream& out, const PairCorpusStats& stats) {
  out << "pairs\t" << stats.num_users() << '\t' << stats.num_items() << '\t' << stats.total() << '\n';
  for (const auto& p : stats.pairs()) out << p.user << '\t' << p.item << '\t' << p.count << '\n';
}

PairCorpusStats read_stats(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw Error("empty pair statistics file");
  const auto header = split_fields(line, '\t');
  if (header.size() != 4 || header[0] != "pairs") throw ParseError(1, "expected 'pairs<TAB>M<TAB>N<TAB>total'");
  const auto m = parse_uint(header[1], 1), n = parse_uint(header[2], 1), total = parse_uint(header[3], 1);
  std::vector<PairCount> pairs;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_fields(line, '\t');
    if (f.size() != 3) throw ParseError(lineno, "expected 'u<TAB>i<TAB>count'");
    pairs.push_back({static_cast<std::uint32_t>(parse_uint(f[0], lineno)),
                     static_cast<std::uint32_t>(parse_uint(f[1], lineno)), parse_uint(f[2], lineno)});
  }
  auto stats = PairCorpusStats::from_counts(m, n, std::move(pairs));
  if (stats.total() != total) throw Error("pair statistics header total does not match the pair counts");
  return stats;
}

}  // namespace psirec
