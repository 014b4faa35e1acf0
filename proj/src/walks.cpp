#include "psirec/walks.hpp"

#include <istream>
#include <ostream>
#include <random>
#include <string>

#include "psirec/error.hpp"
#include "psirec/rng.hpp"
#include "psirec/text_io.hpp"

namespace psirec {

void WalkConfig::validate() const {
  if (beta < 1) throw Error("walk beta must be >= 1");
  if (gamma < 1) throw Error("walk gamma must be >= 1");
}

void WalkCorpus::append(std::span<const Vertex> walk) {
  tokens_.insert(tokens_.end(), walk.begin(), walk.end());
  offsets_.push_back(tokens_.size());
}

WalkCorpus WalkCorpus::uniform(std::vector<Vertex> tokens, std::size_t walk_length) {
  WalkCorpus c;
  const auto n = walk_length == 0 ? 0 : tokens.size() / walk_length;
  c.offsets_.resize(n + 1);
  for (std::size_t w = 0; w <= n; ++w) c.offsets_[w] = w * walk_length;
  c.tokens_ = std::move(tokens);
  return c;
}

namespace {

std::vector<Vertex> walk_starts(const BipartiteGraph& g) {
  std::vector<Vertex> starts;
  for (std::uint32_t u = 0; u < g.num_users(); ++u) {
    if (!g.items_of(u).empty()) starts.push_back(Vertex::user(u));
  }
  for (std::uint32_t i = 0; i < g.num_items(); ++i) {
    if (!g.users_of(i).empty()) starts.push_back(Vertex::item(i));
  }
  return starts;
}

void walk_once(const BipartiteGraph& g, Vertex start, std::size_t walk_number, const WalkConfig& cfg,
               Vertex* out) {
  auto rng = make_stream(cfg.seed, StreamTag::kWalk, static_cast<std::uint64_t>(start.kind), start.index,
                         walk_number);
  Vertex v = start;
  out[0] = v;
  for (std::size_t step = 1; step < cfg.gamma; ++step) {
    const auto adj = g.adjacent(v);
    std::uniform_int_distribution<std::size_t> pick(0, adj.size() - 1);
    v = Vertex{v.is_user() ? VertexKind::kItem : VertexKind::kUser, adj[pick(rng)]};
    out[step] = v;
  }
}

WalkCorpus generate(const BipartiteGraph& g, const WalkConfig& cfg, bool parallel) {
  cfg.validate();
  const auto starts = walk_starts(g);
  const auto n_walks = static_cast<std::ptrdiff_t>(starts.size() * cfg.beta);
  std::vector<Vertex> tokens(static_cast<std::size_t>(n_walks) * cfg.gamma);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t w = 0; w < n_walks; ++w) {
      const auto wu = static_cast<std::size_t>(w);
      walk_once(g, starts[wu / cfg.beta], wu % cfg.beta, cfg, tokens.data() + wu * cfg.gamma);
    }
  } else {
    for (std::ptrdiff_t w = 0; w < n_walks; ++w) {
      const auto wu = static_cast<std::size_t>(w);
      walk_once(g, starts[wu / cfg.beta], wu % cfg.beta, cfg, tokens.data() + wu * cfg.gamma);
    }
  }
  return WalkCorpus::uniform(std::move(tokens), cfg.gamma);
}

}  // namespace

WalkCorpus generate_walks(const BipartiteGraph& g, const WalkConfig& cfg) { return generate(g, cfg, true); }

WalkCorpus generate_walks_serial(const BipartiteGraph& g, const WalkConfig& cfg) {
  return generate(g, cfg, false);
}

void write_corpus(std::ostream& out, const WalkCorpus& corpus) {
  std::string line;
  for (std::size_t w = 0; w < corpus.size(); ++w) {
    line.clear();
    for (const auto& v : corpus.walk(w)) {
      if (!line.empty()) line += ' ';
      line += v.is_user() ? 'u' : 'i';
      line += std::to_string(v.index);
    }
    line += '\n';
    out << line;
  }
}

WalkCorpus read_corpus(std::istream& in) {
  WalkCorpus corpus;
  std::string line;
  std::size_t lineno = 0;
  std::vector<Vertex> walk;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    walk.clear();
    for (auto token : split_fields(line, ' ')) {
      if (token.size() < 2 || (token[0] != 'u' && token[0] != 'i')) {
        throw ParseError(lineno, "bad walk token '" + std::string(token) + "'");
      }
      const auto idx = parse_uint(token.substr(1), lineno);
      walk.push_back({token[0] == 'u' ? VertexKind::kUser : VertexKind::kItem, static_cast<std::uint32_t>(idx)});
    }
    corpus.append(walk);
  }
  return corpus;
}

}  // namespace psirec
