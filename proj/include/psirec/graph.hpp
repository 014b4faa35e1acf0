#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "psirec/dataset.hpp"

namespace psirec {

enum class VertexKind : std::uint8_t { kUser = 0, kItem = 1 };

struct Vertex {
  VertexKind kind = VertexKind::kUser;
  std::uint32_t index = 0;

  static constexpr Vertex user(std::uint32_t u) { return {VertexKind::kUser, u}; }
  static constexpr Vertex item(std::uint32_t i) { return {VertexKind::kItem, i}; }
  bool is_user() const noexcept { return kind == VertexKind::kUser; }

  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// User-item bipartite graph in compressed adjacency form. Each side keeps
/// sorted neighbor lists; isolated vertices are retained.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  std::size_t num_users() const noexcept { return user_offsets_.empty() ? 0 : user_offsets_.size() - 1; }
  std::size_t num_items() const noexcept { return item_offsets_.empty() ? 0 : item_offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return user_targets_.size(); }

  std::span<const std::uint32_t> items_of(std::uint32_t user) const;
  std::span<const std::uint32_t> users_of(std::uint32_t item) const;

  /// Indices of the opposite-kind vertices adjacent to `v`.
  std::span<const std::uint32_t> adjacent(Vertex v) const {
    return v.is_user() ? items_of(v.index) : users_of(v.index);
  }
  std::vector<Vertex> neighbors(Vertex v) const;
  std::size_t degree(Vertex v) const { return adjacent(v).size(); }
  bool has_edge(std::uint32_t user, std::uint32_t item) const;

  friend BipartiteGraph build_graph(std::span<const Interaction>, std::size_t, std::size_t);

 private:
  std::vector<std::size_t> user_offsets_, item_offsets_;
  std::vector<std::uint32_t> user_targets_, item_targets_;
};

/// Edge (u, i) exists iff (u, i) is in `train`. Throws on out-of-range indices.
BipartiteGraph build_graph(std::span<const Interaction> train, std::size_t num_users, std::size_t num_items);

}  // namespace psirec
