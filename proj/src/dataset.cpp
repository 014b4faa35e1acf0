#include "psirec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "psirec/error.hpp"
#include "psirec/rng.hpp"
#include "psirec/text_io.hpp"

namespace psirec {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

void check_key(const std::string& key) {
  if (key.empty() || key.find_first_of("\t\n\r") != std::string::npos) {
    throw Error("key '" + key + "' cannot be persisted (empty or contains tab/newline)");
  }
}

bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

void TextFormat::validate() const {
  if (user_column < 0 || item_column < 0) throw Error("user and item columns are required");
  if (user_column == item_column) throw Error("user and item columns must differ");
  if (delimiter == '\n' || delimiter == '\r') throw Error("invalid delimiter");
}

std::uint32_t IdMap::insert(const std::string& key) {
  auto [it, inserted] = forward_.try_emplace(key, static_cast<std::uint32_t>(keys_.size()));
  if (inserted) keys_.push_back(key);
  return it->second;
}

std::optional<std::uint32_t> IdMap::find(const std::string& key) const {
  auto it = forward_.find(key);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t IdMap::at(const std::string& key) const {
  if (auto idx = find(key)) return *idx;
  throw Error("unknown key '" + key + "'");
}

const std::string& IdMap::key(std::uint32_t index) const {
  if (index >= keys_.size()) throw Error("index " + std::to_string(index) + " out of range");
  return keys_[index];
}

void SplitRatios::validate() const {
  if (!(train > 0 && valid > 0 && test > 0)) throw Error("split ratios must be positive");
  if (std::abs(train + valid + test - 1.0) > 1e-9) throw Error("split ratios must sum to 1");
}

std::vector<RawInteraction> ingest(std::istream& source, const TextFormat& format) {
  format.validate();
  const int needed = std::max({format.user_column, format.item_column, format.value_column,
                               format.timestamp_column}) + 1;
  std::vector<RawInteraction> out;
  std::string line;
  std::size_t lineno = 0;
  bool skip_header = format.header;
  while (next_line(source, line, lineno)) {
    if (skip_header) {
      skip_header = false;
      continue;
    }
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line, format.delimiter);
    if (static_cast<int>(fields.size()) < needed) {
      throw ParseError(lineno, "expected at least " + std::to_string(needed) + " columns, found " +
                                   std::to_string(fields.size()));
    }
    RawInteraction raw;
    raw.user_key = std::string(trim(fields[format.user_column]));
    raw.item_key = std::string(trim(fields[format.item_column]));
    if (raw.user_key.empty()) throw ParseError(lineno, "empty user key");
    if (raw.item_key.empty()) throw ParseError(lineno, "empty item key");
    if (format.value_column >= 0) raw.value = parse_double(trim(fields[format.value_column]), lineno);
    if (format.timestamp_column >= 0) {
      raw.timestamp = parse_int(trim(fields[format.timestamp_column]), lineno);
    }
    out.push_back(std::move(raw));
  }
  if (source.bad()) throw Error("I/O error while reading interactions");
  return out;
}

std::vector<RawInteraction> ingest_file(const std::filesystem::path& path, const TextFormat& format) {
  auto in = open_input(path);
  return ingest(in, format);
}

std::vector<KeyPair> binarize(std::span<const RawInteraction> raws) {
  std::vector<KeyPair> pairs;
  pairs.reserve(raws.size());
  for (const auto& r : raws) pairs.emplace_back(r.user_key, r.item_key);
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::vector<KeyPair> filter_min_interactions(std::vector<KeyPair> pairs, std::size_t min_count) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  if (min_count == 0) return pairs;
  while (true) {
    std::unordered_map<std::string, std::size_t> user_deg, item_deg;
    for (const auto& [u, i] : pairs) {
      ++user_deg[u];
      ++item_deg[i];
    }
    const auto before = pairs.size();
    std::erase_if(pairs, [&](const KeyPair& p) {
      return user_deg[p.first] < min_count || item_deg[p.second] < min_count;
    });
    if (pairs.size() == before) return pairs;
  }
}

Dataset split(std::span<const KeyPair> pairs_in, const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  std::vector<KeyPair> pairs(pairs_in.begin(), pairs_in.end());
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  if (pairs.size() < 3) throw Error("at least 3 interactions are needed to populate all splits");

  Dataset ds;
  std::set<std::string> user_keys, item_keys;
  for (const auto& [u, i] : pairs) {
    check_key(u);
    check_key(i);
    user_keys.insert(u);
    item_keys.insert(i);
  }
  for (const auto& k : user_keys) ds.users.insert(k);
  for (const auto& k : item_keys) ds.items.insert(k);

  Interactions all;
  all.reserve(pairs.size());
  for (const auto& [u, i] : pairs) all.emplace_back(ds.users.at(u), ds.items.at(i));
  auto rng = make_stream(seed, StreamTag::kSplit);
  std::shuffle(all.begin(), all.end(), rng);

  const auto n = static_cast<double>(all.size());
  // The tiny relative slack keeps exact products such as 10 * 0.7 from flooring down.
  const auto n_valid = static_cast<std::size_t>(std::floor(n * ratios.valid * (1.0 + 1e-12)));
  const auto n_test = static_cast<std::size_t>(std::floor(n * ratios.test * (1.0 + 1e-12)));
  const auto n_train = all.size() - n_valid - n_test;

  ds.train.assign(all.begin(), all.begin() + n_train);
  ds.valid.assign(all.begin() + n_train, all.begin() + n_train + n_valid);
  ds.test.assign(all.begin() + n_train + n_valid, all.end());
  normalize(ds.train);
  normalize(ds.valid);
  normalize(ds.test);
  return ds;
}

void normalize(Interactions& interactions) {
  std::sort(interactions.begin(), interactions.end());
  interactions.erase(std::unique(interactions.begin(), interactions.end()), interactions.end());
}

Interactions sparsify(std::span<const Interaction> train_in, double keep_fraction, std::uint64_t seed) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw Error("keep_fraction must lie in (0, 1]");
  Interactions train(train_in.begin(), train_in.end());
  normalize(train);
  if (keep_fraction == 1.0) return train;

  Interactions out;
  std::vector<std::uint32_t> items;
  for (std::size_t begin = 0; begin < train.size();) {
    const auto user = train[begin].first;
    std::size_t end = begin;
    items.clear();
    while (end < train.size() && train[end].first == user) items.push_back(train[end++].second);

    const auto degree = items.size();
    auto keep = static_cast<std::size_t>(std::ceil(static_cast<double>(degree) * keep_fraction - 1e-9));
    keep = std::clamp<std::size_t>(keep, 1, degree);

    auto rng = make_stream(seed, StreamTag::kSparsify, user);
    for (std::size_t k = 0; k < keep; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, degree - 1);
      std::swap(items[k], items[pick(rng)]);
    }
    std::sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(keep));
    for (std::size_t k = 0; k < keep; ++k) out.emplace_back(user, items[k]);
    begin = end;
  }
  return out;
}

void write_interactions(std::ostream& out, std::span<const Interaction> interactions) {
  for (const auto& [u, i] : interactions) out << u << '\t' << i << '\n';
}

Interactions read_interactions(std::istream& in, std::size_t num_users, std::size_t num_items) {
  Interactions out;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    if (line.empty()) continue;
    const auto fields = split_fields(line, '\t');
    if (fields.size() != 2) throw ParseError(lineno, "expected 'user<TAB>item'");
    const auto u = parse_uint(fields[0], lineno);
    const auto i = parse_uint(fields[1], lineno);
    if (u >= num_users || i >= num_items) throw ParseError(lineno, "index out of range");
    out.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(i));
  }
  normalize(out);
  return out;
}

void write_id_map(std::ostream& out, const IdMap& map) {
  for (std::size_t idx = 0; idx < map.size(); ++idx) out << idx << '\t' << map.keys()[idx] << '\n';
}

IdMap read_id_map(std::istream& in) {
  IdMap map;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError(lineno, "expected 'index<TAB>key'");
    const auto idx = parse_uint(std::string_view(line).substr(0, tab), lineno);
    const auto key = line.substr(tab + 1);
    if (key.empty()) throw ParseError(lineno, "empty key");
    if (idx != map.size()) throw ParseError(lineno, "indices must be contiguous from 0");
    if (map.find(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
    map.insert(key);
  }
  return map;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& k : ds.users.keys()) check_key(k);
  for (const auto& k : ds.items.keys()) check_key(k);
  {
    auto out = open_output(dir / "users.tsv");
    write_id_map(out, ds.users);
  }
  {
    auto out = open_output(dir / "items.tsv");
    write_id_map(out, ds.items);
  }
  const std::pair<const char*, const Interactions*> parts[] = {
      {"train.tsv", &ds.train}, {"valid.tsv", &ds.valid}, {"test.tsv", &ds.test}};
  for (const auto& [name, data] : parts) {
    Interactions sorted = *data;
    normalize(sorted);
    auto out = open_output(dir / name);
    write_interactions(out, sorted);
  }
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset ds;
  {
    auto in = open_input(dir / "users.tsv");
    ds.users = read_id_map(in);
  }
  {
    auto in = open_input(dir / "items.tsv");
    ds.items = read_id_map(in);
  }
  const std::pair<const char*, Interactions*> parts[] = {
      {"train.tsv", &ds.train}, {"valid.tsv", &ds.valid}, {"test.tsv", &ds.test}};
  for (const auto& [name, data] : parts) {
    auto in = open_input(dir / name);
    *data = read_interactions(in, ds.num_users(), ds.num_items());
  }
  return ds;
}

void write_key_pairs(std::ostream& out, std::span<const KeyPair> pairs) {
  for (const auto& [u, i] : pairs) {
    check_key(u);
    check_key(i);
    out << u << '\t' << i << '\n';
  }
}

std::vector<KeyPair> read_key_pairs(std::istream& in) {
  std::vector<KeyPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (next_line(in, line, lineno)) {
    if (line.empty()) continue;
    const auto fields = split_fields(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(lineno, "expected 'user_key<TAB>item_key'");
    }
    pairs.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return pairs;
}

}  // namespace psirec
