#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "psirec/graph.hpp"

namespace psirec {

struct WalkConfig {
  std::size_t beta = 10;   // walks launched per vertex
  std::size_t gamma = 80;  // vertices per walk
  std::uint64_t seed = 0;

  void validate() const;
};

/// Flat storage for a set of vertex sequences.
class WalkCorpus {
 public:
  WalkCorpus() = default;

  std::size_t size() const noexcept { return offsets_.size() - 1; }
  bool empty() const noexcept { return size() == 0; }
  std::span<const Vertex> walk(std::size_t w) const {
    return {tokens_.data() + offsets_[w], offsets_[w + 1] - offsets_[w]};
  }
  std::size_t num_tokens() const noexcept { return tokens_.size(); }

  void append(std::span<const Vertex> walk);

  /// Corpus of equal-length walks laid out back to back in `tokens`.
  static WalkCorpus uniform(std::vector<Vertex> tokens, std::size_t walk_length);

  friend bool operator==(const WalkCorpus&, const WalkCorpus&) = default;

 private:
  std::vector<Vertex> tokens_;
  std::vector<std::size_t> offsets_{0};
};

/// `beta` walks of `gamma` vertices from every non-isolated vertex (users
/// first, then items), ordered by start vertex and then walk number. Each walk
/// draws from its own stream keyed by (seed, start vertex, walk number), so the
/// corpus does not depend on the OpenMP schedule.
WalkCorpus generate_walks(const BipartiteGraph& g, const WalkConfig& cfg);

/// Single-threaded reference for generate_walks; must produce the same corpus.
WalkCorpus generate_walks_serial(const BipartiteGraph& g, const WalkConfig& cfg);

/// One walk per line, tokens "u<idx>" / "i<idx>" separated by single spaces.
void write_corpus(std::ostream& out, const WalkCorpus& corpus);
WalkCorpus read_corpus(std::istream& in);

}  // namespace psirec
