#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "oracles.hpp"
#include "psirec/error.hpp"
#include "psirec/pairs.hpp"

using namespace psirec;

namespace {

WalkCorpus corpus_of(const std::vector<std::vector<Vertex>>& walks) {
  WalkCorpus c;
  for (const auto& w : walks) c.append(w);
  return c;
}

std::vector<std::vector<oracle::Token>> tokens_of(const WalkCorpus& c) {
  std::vector<std::vector<oracle::Token>> out;
  for (std::size_t w = 0; w < c.size(); ++w) {
    auto& walk = out.emplace_back();
    for (const auto& v : c.walk(w)) walk.emplace_back(v.is_user(), v.index);
  }
  return out;
}

WalkCorpus random_corpus(std::mt19937_64& rng, std::size_t users, std::size_t items) {
  auto edges = testing::random_interactions(rng, users, items, 0.15);
  if (edges.empty()) edges.emplace_back(0, 0);
  const auto g = build_graph(edges, users, items);
  return generate_walks_serial(g, WalkConfig{2, 3 + rng() % 12, rng()});
}

void check_matches_oracle(const PairCorpusStats& stats, const WalkCorpus& corpus, std::size_t sigma) {
  const auto expected = oracle::window_pairs(tokens_of(corpus), sigma);
  REQUIRE(stats.pairs().size() == expected.size());
  for (const auto& p : stats.pairs()) CHECK(expected.at({p.user, p.item}) == p.count);
}

}  // namespace

TEST_CASE("four-vertex walk with window 3") {
  const auto c = corpus_of({{Vertex::user(0), Vertex::item(1), Vertex::user(1), Vertex::item(0)}});
  const auto s = sample_pairs(c, 3, 2, 2);
  CHECK(s.pairs().size() == 4);
  for (std::uint32_t u = 0; u < 2; ++u)
    for (std::uint32_t i = 0; i < 2; ++i) CHECK(s.pair_count(u, i) == 1);
  CHECK(s.user_count(0) == 2);
  CHECK(s.user_count(1) == 2);
  CHECK(s.item_count(0) == 2);
  CHECK(s.item_count(1) == 2);
  CHECK(s.total() == 4);
  CHECK(s.marginals_consistent());
}

TEST_CASE("minimal window") {
  const auto s = sample_pairs(corpus_of({{Vertex::user(0), Vertex::item(0)}}), 1, 1, 1);
  CHECK(s.total() == 1);
  CHECK(s.pair_count(0, 0) == 1);
}

TEST_CASE("window 3 reaches the item three steps away") {
  // u0 i0 u1 i1 u2 i2: with sigma 3, u0 pairs with i0 and i1 but not i2.
  const auto c = corpus_of({{Vertex::user(0), Vertex::item(0), Vertex::user(1), Vertex::item(1), Vertex::user(2),
                             Vertex::item(2)}});
  const auto s = sample_pairs(c, 3, 3, 3);
  CHECK(s.pair_count(0, 1) == 1);
  CHECK(s.pair_count(0, 2) == 0);
  CHECK(s.pair_count(2, 0) == 1);
  CHECK(sample_pairs(c, 1, 3, 3).pair_count(0, 1) == 0);
}

TEST_CASE("item-initial walks use only user centres") {
  const auto c = corpus_of({{Vertex::item(0), Vertex::user(0), Vertex::item(1)}});
  const auto s = sample_pairs(c, 1, 1, 2);
  CHECK(s.total() == 2);
  CHECK(s.pair_count(0, 0) == 1);
  CHECK(s.pair_count(0, 1) == 1);
}

TEST_CASE("invalid corpora and windows are rejected") {
  const auto ok = corpus_of({{Vertex::user(0), Vertex::item(0)}});
  CHECK_THROWS_AS(sample_pairs(ok, 2, 1, 1), Error);
  CHECK_THROWS_AS(sample_pairs(ok, 0, 1, 1), Error);
  CHECK_THROWS_AS(sample_pairs(corpus_of({{Vertex::user(0), Vertex::user(0)}}), 1, 1, 1), Error);
  CHECK_THROWS_AS(sample_pairs(ok, 1, 1, 0), Error);
}

TEST_CASE("sample_pairs matches the window oracle on random corpora") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const auto corpus = random_corpus(rng, 12, 15);
    for (std::size_t sigma : {1, 3, 5, 7}) {
      const auto s = sample_pairs(corpus, sigma, 12, 15);
      CHECK(s.marginals_consistent());
      check_matches_oracle(s, corpus, sigma);
    }
  }
}

TEST_CASE("window 1 only pairs training edges") {
  std::mt19937_64 rng(4);
  const auto edges = testing::random_interactions(rng, 20, 20, 0.1);
  const auto g = build_graph(edges, 20, 20);
  const auto s = sample_pairs(generate_walks(g, {3, 15, 6}), 1, 20, 20);
  for (const auto& p : s.pairs()) CHECK(g.has_edge(p.user, p.item));
}

TEST_CASE("pair counts grow with the window") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto corpus = random_corpus(rng, 10, 10);
    auto previous = sample_pairs(corpus, 1, 10, 10);
    for (std::size_t sigma : {3, 5, 9}) {
      const auto next = sample_pairs(corpus, sigma, 10, 10);
      for (const auto& p : previous.pairs()) CHECK(next.pair_count(p.user, p.item) >= p.count);
      previous = next;
    }
  }
}

TEST_CASE("merge") {
  std::mt19937_64 rng(9);
  const auto a_corpus = random_corpus(rng, 8, 9);
  const auto b_corpus = random_corpus(rng, 8, 9);
  const auto a = sample_pairs(a_corpus, 3, 8, 9);
  const auto b = sample_pairs(b_corpus, 3, 8, 9);

  CHECK(merge(a, PairCorpusStats(8, 9)) == a);

  const auto doubled = merge(a, a);
  CHECK(doubled.marginals_consistent());
  CHECK(doubled.total() == 2 * a.total());
  for (const auto& p : a.pairs()) CHECK(doubled.pair_count(p.user, p.item) == 2 * p.count);

  WalkCorpus both = a_corpus;
  for (std::size_t w = 0; w < b_corpus.size(); ++w) both.append(b_corpus.walk(w));
  const auto merged = merge(a, b);
  CHECK(merged.marginals_consistent());
  CHECK(merged == sample_pairs(both, 3, 8, 9));
  CHECK(merge(b, a) == merged);

  CHECK_THROWS_AS(merge(a, PairCorpusStats(8, 10)), Error);
}

TEST_CASE("parallel counting equals the serial reference") {
  std::mt19937_64 rng(12);
  const auto g = build_graph(testing::random_interactions(rng, 60, 70, 0.05), 60, 70);
  const auto corpus = generate_walks_serial(g, {5, 40, 2});
  const auto serial = sample_pairs_serial(corpus, 5, 60, 70);
  CHECK(serial.marginals_consistent());
  for (int threads : {1, 3, 4}) {
    testing::ThreadCount tc(threads);
    CHECK(sample_pairs(corpus, 5, 60, 70) == serial);
  }
}

TEST_CASE("stats text round trip") {
  std::mt19937_64 rng(13);
  const auto s = sample_pairs(random_corpus(rng, 7, 7), 3, 7, 7);
  std::stringstream ss;
  write_stats(ss, s);
  CHECK(read_stats(ss) == s);

  std::istringstream wrong_total("pairs\t1\t1\t5\n0\t0\t2\n");
  CHECK_THROWS_AS(read_stats(wrong_total), Error);
}
