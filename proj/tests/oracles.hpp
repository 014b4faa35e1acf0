#pragma once
// Independent reference computations used only by the test suites. None of
// these call into the library's computational paths.

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using Cell = std::pair<std::uint32_t, std::uint32_t>;

/// A walk as (is_user, index) tokens.
using Token = std::pair<bool, std::uint32_t>;

/// Pairs every user position with every item position at distance <= sigma.
inline std::map<Cell, std::uint64_t> window_pairs(const std::vector<std::vector<Token>>& walks, std::size_t sigma) {
  std::map<Cell, std::uint64_t> counts;
  for (const auto& w : walks) {
    for (std::size_t a = 0; a < w.size(); ++a) {
      if (!w[a].first) continue;
      for (std::size_t b = 0; b < w.size(); ++b) {
        const auto dist = a > b ? a - b : b - a;
        if (!w[b].first && dist <= sigma) ++counts[{w[a].second, w[b].second}];
      }
    }
  }
  return counts;
}

/// Dense SPPMI matrix straight from a raw pair multiset (one element per occurrence).
inline std::vector<std::vector<double>> sppmi_dense(const std::vector<Cell>& multiset, std::size_t users,
                                                    std::size_t items, double shift_k) {
  std::vector<std::vector<double>> joint(users, std::vector<double>(items, 0.0));
  std::vector<double> row(users, 0.0), col(items, 0.0);
  for (const auto& [u, i] : multiset) {
    joint[u][i] += 1;
    row[u] += 1;
    col[i] += 1;
  }
  const double total = static_cast<double>(multiset.size());
  std::vector<std::vector<double>> s(users, std::vector<double>(items, 0.0));
  for (std::size_t u = 0; u < users; ++u) {
    for (std::size_t i = 0; i < items; ++i) {
      if (joint[u][i] == 0) continue;
      const double pmi = std::log(joint[u][i]) + std::log(total) - std::log(row[u]) - std::log(col[i]);
      s[u][i] = std::max(pmi - std::log(shift_k), 0.0);
    }
  }
  return s;
}

using Dense = std::vector<std::vector<double>>;

/// Objective by explicit double loop over every cell.
inline double dense_loss(const Dense& s, const Dense& x, const Dense& y, double lambda) {
  double total = 0.0;
  for (std::size_t u = 0; u < x.size(); ++u) {
    for (std::size_t i = 0; i < y.size(); ++i) {
      double pred = 0.0;
      for (std::size_t k = 0; k < x[u].size(); ++k) pred += x[u][k] * y[i][k];
      total += (s[u][i] - pred) * (s[u][i] - pred);
    }
  }
  double reg = 0.0;
  for (const auto& r : x)
    for (double v : r) reg += v * v;
  for (const auto& r : y)
    for (double v : r) reg += v * v;
  return total + lambda * reg;
}

/// Plain gradient descent on (s - xy)^2 + lambda (x^2 + y^2); returns the final x*y.
inline double gradient_descent_1x1(double s, double lambda, double x, double y, double step, int iters) {
  for (int t = 0; t < iters; ++t) {
    const double r = s - x * y;
    const double gx = -2.0 * y * r + 2.0 * lambda * x;
    const double gy = -2.0 * x * r + 2.0 * lambda * y;
    x -= step * gx;
    y -= step * gy;
  }
  return x * y;
}

/// floor(n * ratio) for valid and test, remainder to train.
inline std::vector<std::size_t> split_sizes(std::size_t n, double valid, double test) {
  const auto nv = static_cast<std::size_t>(static_cast<long double>(n) * valid + 1e-9L);
  const auto nt = static_cast<std::size_t>(static_cast<long double>(n) * test + 1e-9L);
  return {n - nv - nt, nv, nt};
}

}  // namespace oracle
