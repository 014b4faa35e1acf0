#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace psirec {

struct RawInteraction {
  std::string user_key;
  std::string item_key;
  double value = 1.0;
  std::optional<std::int64_t> timestamp;
};

/// Column layout of a delimiter-separated interaction log. Negative column
/// indices mean "absent".
struct TextFormat {
  char delimiter = ',';
  int user_column = 0;
  int item_column = 1;
  int value_column = -1;
  int timestamp_column = -1;
  bool header = false;

  void validate() const;
};

using KeyPair = std::pair<std::string, std::string>;

/// (user index, item index). Interaction sets are kept as sorted, duplicate-free vectors.
using Interaction = std::pair<std::uint32_t, std::uint32_t>;
using Interactions = std::vector<Interaction>;

/// Dense, contiguous indexing of opaque external keys.
class IdMap {
 public:
  std::uint32_t insert(const std::string& key);
  std::optional<std::uint32_t> find(const std::string& key) const;
  std::uint32_t at(const std::string& key) const;
  const std::string& key(std::uint32_t index) const;
  std::size_t size() const noexcept { return keys_.size(); }
  const std::vector<std::string>& keys() const noexcept { return keys_; }

  friend bool operator==(const IdMap& a, const IdMap& b) { return a.keys_ == b.keys_; }

 private:
  std::unordered_map<std::string, std::uint32_t> forward_;
  std::vector<std::string> keys_;
};

struct Dataset {
  IdMap users;
  IdMap items;
  Interactions train;
  Interactions valid;
  Interactions test;

  std::size_t num_users() const noexcept { return users.size(); }
  std::size_t num_items() const noexcept { return items.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;

  void validate() const;
};

std::vector<RawInteraction> ingest(std::istream& source, const TextFormat& format);
std::vector<RawInteraction> ingest_file(const std::filesystem::path& path, const TextFormat& format);

/// Drops values and timestamps; returns the distinct (user, item) key pairs in sorted order.
std::vector<KeyPair> binarize(std::span<const RawInteraction> raws);

/// Iteratively removes users and items with fewer than `min_count` interactions
/// until every survivor meets the threshold.
std::vector<KeyPair> filter_min_interactions(std::vector<KeyPair> pairs, std::size_t min_count);

/// Seeded per-interaction split. Valid and test receive floor(n * ratio)
/// interactions; the remainder goes to train. ID maps cover every user and item
/// in `pairs`, ordered by key.
Dataset split(std::span<const KeyPair> pairs, const SplitRatios& ratios, std::uint64_t seed);

/// Keeps ceil(d_u * keep_fraction) of every user's interactions, sampled
/// uniformly from a stream keyed by (seed, user).
Interactions sparsify(std::span<const Interaction> train, double keep_fraction, std::uint64_t seed);

/// Sorts and deduplicates in place.
void normalize(Interactions& interactions);

// Persistence: "u<TAB>i" lines sorted by (u, i), and "index<TAB>key" ID maps.
void write_interactions(std::ostream& out, std::span<const Interaction> interactions);
Interactions read_interactions(std::istream& in, std::size_t num_users, std::size_t num_items);
void write_id_map(std::ostream& out, const IdMap& map);
IdMap read_id_map(std::istream& in);

void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

// Binarized key pairs ("user<TAB>item" per line), the output of the ingest stage.
void write_key_pairs(std::ostream& out, std::span<const KeyPair> pairs);
std::vector<KeyPair> read_key_pairs(std::istream& in);

}  // namespace psirec
