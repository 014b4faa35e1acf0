#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "psirec/error.hpp"
#include "psirec/evaluation.hpp"

using namespace psirec;

namespace {

RankedList list_of(std::uint32_t user, std::vector<std::uint32_t> items) {
  RankedList l{user, {}};
  double score = static_cast<double>(items.size());
  for (auto i : items) l.items.push_back({i, score--});
  return l;
}

}  // namespace

TEST_CASE("one hit out of two relevant items at cutoff 5") {
  const std::vector<std::uint32_t> relevant = {1, 2};
  const auto m = score_user(list_of(0, {1, 5, 6, 7, 8}), relevant, 5);
  CHECK(m.hits == 1);
  CHECK(std::abs(m.at.precision - 0.2) <= 1e-12);
  CHECK(std::abs(m.at.recall - 0.5) <= 1e-12);
  CHECK(std::abs(m.at.f1 - 2.0 * 0.2 * 0.5 / 0.7) <= 1e-12);
  CHECK(m.at.f1 == doctest::Approx(0.28571).epsilon(1e-4));
}

TEST_CASE("users without test items contribute zeros") {
  const auto m = score_user(list_of(0, {1, 2}), {}, 5);
  CHECK(m.at.precision == 0.0);
  CHECK(m.at.recall == 0.0);
  CHECK(m.at.f1 == 0.0);
}

TEST_CASE("a perfect list scores one") {
  const std::vector<std::uint32_t> relevant = {3, 4, 9};
  const auto m = score_user(list_of(0, {9, 3, 4}), relevant, 3);
  CHECK(m.at.precision == 1.0);
  CHECK(m.at.recall == 1.0);
  CHECK(m.at.f1 == 1.0);
}

TEST_CASE("short lists divide by the cutoff") {
  const std::vector<std::uint32_t> relevant = {0};
  const auto m = score_user(list_of(0, {0}), relevant, 10);
  CHECK(m.at.precision == doctest::Approx(0.1));
  CHECK(m.at.recall == 1.0);
}

TEST_CASE("evaluate averages over every user") {
  const std::vector<RankedList> recs = {list_of(0, {1, 5, 6, 7, 8}), list_of(1, {0, 1, 2, 3, 4}),
                                        list_of(2, {0, 1, 2, 3, 4})};
  const Interactions test = {{0, 1}, {0, 2}, {2, 0}};
  const std::vector<std::size_t> cutoffs = {5};
  const auto report = evaluate(recs, test, 3, cutoffs);
  CHECK(report.user_count == 3);
  CHECK(report.at(5).precision == doctest::Approx((0.2 + 0.0 + 0.2) / 3).epsilon(1e-14));
  CHECK(report.at(5).recall == doctest::Approx((0.5 + 0.0 + 1.0) / 3).epsilon(1e-14));
  CHECK_THROWS_AS(report.at(10), Error);
}

TEST_CASE("missing or misordered lists are errors") {
  const std::vector<std::size_t> cutoffs = {5};
  const std::vector<RankedList> short_recs = {list_of(0, {1})};
  CHECK_THROWS_AS(evaluate(short_recs, {}, 2, cutoffs), Error);
  const std::vector<RankedList> swapped = {list_of(1, {1}), list_of(0, {1})};
  CHECK_THROWS_AS(evaluate(swapped, {}, 2, cutoffs), Error);
}

TEST_CASE("metric identities on random lists") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t users = 30, items = 25;
    const auto test = testing::random_interactions(rng, users, items, 0.1);
    std::vector<RankedList> recs;
    for (std::uint32_t u = 0; u < users; ++u) {
      std::vector<std::uint32_t> all(items);
      std::iota(all.begin(), all.end(), 0u);
      std::shuffle(all.begin(), all.end(), rng);
      all.resize(rng() % 12);
      recs.push_back(list_of(u, all));
    }
    const std::vector<std::size_t> cutoffs = {1, 5, 10};
    const auto per_user = per_user_metrics(recs, test, users, cutoffs);
    for (const auto& row : per_user) {
      for (const auto& m : row) {
        const double pk = m.at.precision * static_cast<double>(m.at.k);
        CHECK(std::abs(pk - std::round(pk)) <= 1e-12);
        CHECK(static_cast<std::size_t>(std::round(pk)) == m.hits);
        if (m.relevant > 0) CHECK(m.at.recall * static_cast<double>(m.relevant) == doctest::Approx(m.hits));
        if (m.at.precision + m.at.recall == 0.0) {
          CHECK(m.at.f1 == 0.0);
        } else {
          const double h = 2 * m.at.precision * m.at.recall / (m.at.precision + m.at.recall);
          CHECK(std::abs(m.at.f1 - h) <= 1e-12);
        }
        CHECK(m.at.precision <= 1.0);
        CHECK(m.at.recall <= 1.0);
      }
    }
    const auto report = evaluate(recs, test, users, cutoffs);
    for (const auto& c : report.cutoffs) {
      CHECK(c.precision >= 0.0);
      CHECK(c.f1 <= 1.0);
    }
  }
}

TEST_CASE("items beyond the cutoff do not matter") {
  const Interactions test = {{0, 3}};
  const std::vector<std::size_t> cutoffs = {2};
  const std::vector<RankedList> a = {list_of(0, {3, 1, 7, 8})};
  const std::vector<RankedList> b = {list_of(0, {3, 1, 9})};
  CHECK(evaluate(a, test, 1, cutoffs).at(2).f1 == evaluate(b, test, 1, cutoffs).at(2).f1);
}
