#include "psirec/graph.hpp"

#include <algorithm>
#include <string>

#include "psirec/error.hpp"

namespace psirec {

namespace {

void fill_csr(std::span<const Interaction> edges, std::size_t rows, bool by_user,
              std::vector<std::size_t>& offsets, std::vector<std::uint32_t>& targets) {
  offsets.assign(rows + 1, 0);
  for (const auto& e : edges) ++offsets[(by_user ? e.first : e.second) + 1];
  for (std::size_t r = 0; r < rows; ++r) offsets[r + 1] += offsets[r];
  targets.resize(edges.size());
  auto cursor = offsets;
  for (const auto& e : edges) {
    const auto row = by_user ? e.first : e.second;
    targets[cursor[row]++] = by_user ? e.second : e.first;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::sort(targets.begin() + static_cast<std::ptrdiff_t>(offsets[r]),
              targets.begin() + static_cast<std::ptrdiff_t>(offsets[r + 1]));
  }
}

}  // namespace

BipartiteGraph build_graph(std::span<const Interaction> train, std::size_t num_users, std::size_t num_items) {
  Interactions edges(train.begin(), train.end());
  for (const auto& [u, i] : edges) {
    if (u >= num_users || i >= num_items) {
      throw Error("edge (" + std::to_string(u) + ", " + std::to_string(i) + ") out of range");
    }
  }
  normalize(edges);
  BipartiteGraph g;
  fill_csr(edges, num_users, true, g.user_offsets_, g.user_targets_);
  fill_csr(edges, num_items, false, g.item_offsets_, g.item_targets_);
  return g;
}

std::span<const std::uint32_t> BipartiteGraph::items_of(std::uint32_t user) const {
  if (user >= num_users()) throw Error("user vertex " + std::to_string(user) + " out of range");
  return {user_targets_.data() + user_offsets_[user], user_offsets_[user + 1] - user_offsets_[user]};
}

std::span<const std::uint32_t> BipartiteGraph::users_of(std::uint32_t item) const {
  if (item >= num_items()) throw Error("item vertex " + std::to_string(item) + " out of range");
  return {item_targets_.data() + item_offsets_[item], item_offsets_[item + 1] - item_offsets_[item]};
}

std::vector<Vertex> BipartiteGraph::neighbors(Vertex v) const {
  const auto adj = adjacent(v);
  const auto other = v.is_user() ? VertexKind::kItem : VertexKind::kUser;
  std::vector<Vertex> out;
  out.reserve(adj.size());
  for (auto idx : adj) out.push_back({other, idx});
  return out;
}

bool BipartiteGraph::has_edge(std::uint32_t user, std::uint32_t item) const {
  const auto adj = items_of(user);
  return std::binary_search(adj.begin(), adj.end(), item);
}

}  // namespace psirec
