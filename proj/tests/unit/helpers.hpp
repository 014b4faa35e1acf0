#pragma once

#include <omp.h>

#include <cstdint>
#include <random>

#include "psirec/dataset.hpp"

namespace testing {

/// Sets the OpenMP thread count for the lifetime of the object.
class ThreadCount {
 public:
  explicit ThreadCount(int n) : previous_(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(previous_); }
  ThreadCount(const ThreadCount&) = delete;
  ThreadCount& operator=(const ThreadCount&) = delete;

 private:
  int previous_;
};

inline psirec::Interactions random_interactions(std::mt19937_64& rng, std::size_t users, std::size_t items,
                                                double density) {
  std::bernoulli_distribution edge(density);
  psirec::Interactions out;
  for (std::uint32_t u = 0; u < users; ++u) {
    for (std::uint32_t i = 0; i < items; ++i) {
      if (edge(rng)) out.emplace_back(u, i);
    }
  }
  return out;
}

/// The toy graph: u1-{i1,i2}, u2-{i2,i3}, u3-{i3,i4}, zero-based.
inline psirec::Interactions toy_edges() { return {{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 3}}; }

}  // namespace testing
