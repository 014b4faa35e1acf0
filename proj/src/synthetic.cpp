#include "psirec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "psirec/error.hpp"
#include "psirec/rng.hpp"

namespace psirec {

void SyntheticConfig::validate() const {
  if (users < 1 || items < 1) throw Error("synthetic data needs at least one user and one item");
  if (communities < 1) throw Error("communities must be >= 1");
  if (!(p_in >= 0 && p_in <= 1 && p_out >= 0 && p_out <= 1)) throw Error("edge probabilities must lie in [0, 1]");
  if (!(mean_interactions >= 1.0)) throw Error("mean_interactions must be >= 1");
  if (!(popularity_skew >= 0.0)) throw Error("popularity_skew must be >= 0");
  if (!(activity_spread >= 0.0)) throw Error("activity_spread must be >= 0");
}

std::vector<KeyPair> generate_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  std::vector<double> weight(cfg.items);
  for (std::size_t i = 0; i < cfg.items; ++i) {
    weight[i] = std::pow(1.0 + static_cast<double>(i / cfg.communities), -cfg.popularity_skew);
  }
  std::vector<KeyPair> pairs;
  std::vector<std::uint32_t> edges;
  for (std::size_t u = 0; u < cfg.users; ++u) {
    auto rng = make_stream(cfg.seed, StreamTag::kSynthetic, u);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    edges.clear();
    for (std::size_t i = 0; i < cfg.items; ++i) {
      const double p = (u % cfg.communities == i % cfg.communities ? cfg.p_in : cfg.p_out) * weight[i];
      if (coin(rng) < p) edges.push_back(static_cast<std::uint32_t>(i));
    }
    double activity = 1.0;
    if (cfg.activity_spread > 0.0) {
      const double s = cfg.activity_spread;
      activity = std::exp(s * std::normal_distribution<double>(0.0, 1.0)(rng) - 0.5 * s * s);
    }
    std::size_t target = 1;
    if (cfg.mean_interactions > 1.0) {
      target += std::poisson_distribution<std::size_t>((cfg.mean_interactions - 1.0) * activity)(rng);
    }
    const auto keep = std::min(edges.size(), target);
    std::shuffle(edges.begin(), edges.end(), rng);
    for (std::size_t e = 0; e < keep; ++e) {
      pairs.emplace_back("u" + std::to_string(u), "i" + std::to_string(edges[e]));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

void write_synthetic_csv(std::ostream& out, std::span<const KeyPair> pairs) {
  out << "user,item,value\n";
  for (const auto& [u, i] : pairs) out << u << ',' << i << ",1\n";
}

}  // namespace psirec
