#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psirec/dataset.hpp"
#include "psirec/pairs.hpp"

namespace psirec {

enum class Measure : std::uint8_t {
  kCoOccurrence,  // s_ui = #(u,i)
  kShiftedPmi,    // s_ui = max(PMI(u,i) - log k, 0)
  kBinary,        // s_ui = r_ui, the plain interaction matrix
};

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view name);

struct ConfidenceEntry {
  std::uint32_t user = 0;
  std::uint32_t item = 0;
  double value = 0.0;

  friend bool operator==(const ConfidenceEntry&, const ConfidenceEntry&) = default;
};

/// Compressed sparse rows: row r owns entries [offsets[r], offsets[r+1]).
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
};

/// Sparse non-negative pseudo-implicit feedback matrix S. Only strictly
/// positive entries are stored; absent cells are zero.
class ConfidenceMatrix {
 public:
  ConfidenceMatrix() = default;
  ConfidenceMatrix(std::size_t num_users, std::size_t num_items, Measure measure, double shift_k,
                   std::vector<ConfidenceEntry> entries);

  std::size_t num_users() const noexcept { return num_users_; }
  std::size_t num_items() const noexcept { return num_items_; }
  Measure measure() const noexcept { return measure_; }
  double shift_k() const noexcept { return shift_k_; }

  /// Sorted by (user, item).
  std::span<const ConfidenceEntry> entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  double value(std::uint32_t user, std::uint32_t item) const;

  CsrMatrix by_user() const;
  CsrMatrix by_item() const;

  friend bool operator==(const ConfidenceMatrix&, const ConfidenceMatrix&) = default;

 private:
  std::size_t num_users_ = 0;
  std::size_t num_items_ = 0;
  Measure measure_ = Measure::kCoOccurrence;
  double shift_k_ = 1.0;
  std::vector<ConfidenceEntry> entries_;
};

ConfidenceMatrix co_matrix(const PairCorpusStats& stats);

/// Shifted positive PMI with natural logarithms. Pairs that never co-occur,
/// and pairs whose shifted PMI is not positive, are left at zero.
ConfidenceMatrix sppmi_matrix(const PairCorpusStats& stats, double shift_k);

/// S = R: one unit entry per training interaction.
ConfidenceMatrix binary_matrix(std::span<const Interaction> train, std::size_t num_users, std::size_t num_items);

/// Header "confidence<TAB>M<TAB>N<TAB>measure<TAB>shift_k", then
/// "u<TAB>i<TAB>s_ui" with 17 significant digits.
void write_confidence(std::ostream& out, const ConfidenceMatrix& s);
ConfidenceMatrix read_confidence(std::istream& in);

}  // namespace psirec
