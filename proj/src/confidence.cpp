#include "psirec/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <tuple>

#include "psirec/error.hpp"
#include "psirec/text_io.hpp"

namespace psirec {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::kCoOccurrence: return "co";
    case Measure::kShiftedPmi: return "pmi";
    case Measure::kBinary: return "binary";
  }
  return "?";
}

Measure parse_measure(std::string_view name) {
  if (name == "co") return Measure::kCoOccurrence;
  if (name == "pmi") return Measure::kShiftedPmi;
  if (name == "binary") return Measure::kBinary;
  throw Error("unknown confidence measure '" + std::string(name) + "'");
}

ConfidenceMatrix::ConfidenceMatrix(std::size_t num_users, std::size_t num_items, Measure measure,
                                   double shift_k, std::vector<ConfidenceEntry> entries)
    : num_users_(num_users), num_items_(num_items), measure_(measure), shift_k_(shift_k),
      entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const ConfidenceEntry& a, const ConfidenceEntry& b) {
    return std::tie(a.user, a.item) < std::tie(b.user, b.item);
  });
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& x = entries_[e];
    if (x.user >= num_users_ || x.item >= num_items_) throw Error("confidence entry out of range");
    if (!(x.value > 0.0) || !std::isfinite(x.value)) throw Error("confidence entries must be finite and > 0");
    if (e > 0 && entries_[e - 1].user == x.user && entries_[e - 1].item == x.item) {
      throw Error("duplicate confidence entry");
    }
  }
}

double ConfidenceMatrix::value(std::uint32_t user, std::uint32_t item) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{user, item},
                             [](const ConfidenceEntry& e, const std::pair<std::uint32_t, std::uint32_t>& k) {
                               return std::tie(e.user, e.item) < std::tie(k.first, k.second);
                             });
  return (it != entries_.end() && it->user == user && it->item == item) ? it->value : 0.0;
}

namespace {

CsrMatrix to_csr(std::span<const ConfidenceEntry> entries, std::size_t rows, std::size_t cols, bool by_user) {
  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.offsets.assign(rows + 1, 0);
  for (const auto& e : entries) ++m.offsets[(by_user ? e.user : e.item) + 1];
  for (std::size_t r = 0; r < rows; ++r) m.offsets[r + 1] += m.offsets[r];
  m.indices.resize(entries.size());
  m.values.resize(entries.size());
  auto cursor = m.offsets;
  // entries are sorted by (user, item), so both layouts come out column-sorted per row.
  for (const auto& e : entries) {
    const auto pos = cursor[by_user ? e.user : e.item]++;
    m.indices[pos] = by_user ? e.item : e.user;
    m.values[pos] = e.value;
  }
  return m;
}

}  // namespace

CsrMatrix ConfidenceMatrix::by_user() const { return to_csr(entries_, num_users_, num_items_, true); }
CsrMatrix ConfidenceMatrix::by_item() const { return to_csr(entries_, num_items_, num_users_, false); }

ConfidenceMatrix co_matrix(const PairCorpusStats& stats) {
  std::vector<ConfidenceEntry> entries;
  entries.reserve(stats.pairs().size());
  for (const auto& p : stats.pairs()) entries.push_back({p.user, p.item, static_cast<double>(p.count)});
  return {stats.num_users(), stats.num_items(), Measure::kCoOccurrence, 1.0, std::move(entries)};
}

ConfidenceMatrix sppmi_matrix(const PairCorpusStats& stats, double shift_k) {
  if (!(shift_k >= 1.0) || !std::isfinite(shift_k)) throw Error("shift_k must be a finite value >= 1");
  if (stats.total() == 0) throw Error("cannot compute PMI from an empty pair corpus");
  const double total = static_cast<double>(stats.total());
  const double log_shift = std::log(shift_k);
  std::vector<ConfidenceEntry> entries;
  for (const auto& p : stats.pairs()) {
    const double joint = static_cast<double>(p.count) * total;
    const double marginals =
        static_cast<double>(stats.user_count(p.user)) * static_cast<double>(stats.item_count(p.item));
    const double shifted = std::log(joint / marginals) - log_shift;
    if (shifted > 0.0) entries.push_back({p.user, p.item, shifted});
  }
  return {stats.num_users(), stats.num_items(), Measure::kShiftedPmi, shift_k, std::move(entries)};
}

ConfidenceMatrix binary_matrix(std::span<const Interaction> train, std::size_t num_users, std::size_t num_items) {
  Interactions edges(train.begin(), train.end());
  normalize(edges);
  std::vector<ConfidenceEntry> entries;
  entries.reserve(edges.size());
  for (const auto& [u, i] : edges) entries.push_back({u, i, 1.0});
  return {num_users, num_items, Measure::kBinary, 1.0, std::move(entries)};
}

void write_confidence(std::ostream& out, const ConfidenceMatrix& s) {
  out << "confidence\t" << s.num_users() << '\t' << s.num_items() << '\t' << to_string(s.measure()) << '\t'
      << format_double(s.shift_k()) << '\n';
  for (const auto& e : s.entries()) out << e.user << '\t' << e.item << '\t' << format_double(e.value) << '\n';
}

ConfidenceMatrix read_confidence(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error("empty confidence file");
  const auto h = split_fields(line, '\t');
  if (h.size() != 5 || h[0] != "confidence") {
    throw ParseError(1, "expected 'confidence<TAB>M<TAB>N<TAB>measure<TAB>shift_k'");
  }
  const auto m = parse_uint(h[1], 1), n = parse_uint(h[2], 1);
  const auto measure = parse_measure(h[3]);
  const auto shift_k = parse_double(h[4], 1);
  std::vector<ConfidenceEntry> entries;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_fields(line, '\t');
    if (f.size() != 3) throw ParseError(lineno, "expected 'u<TAB>i<TAB>value'");
    entries.push_back({static_cast<std::uint32_t>(parse_uint(f[0], lineno)),
                       static_cast<std::uint32_t>(parse_uint(f[1], lineno)), parse_double(f[2], lineno)});
  }
  return {m, n, measure, shift_k, std::move(entries)};
}

}  // namespace psirec
