#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <span>
#include <vector>

#include "psirec/config.hpp"
#include "psirec/confidence.hpp"
#include "psirec/dataset.hpp"
#include "psirec/evaluation.hpp"
#include "psirec/pairs.hpp"
#include "psirec/recommend.hpp"

namespace psirec {

struct ExperimentRow {
  Method method = Method::kPsiRecPmi;
  std::uint64_t seed = 0;
  double keep_fraction = 1.0;
  std::optional<std::size_t> sigma;  // only for walk-based methods
  MetricsReport metrics;
};

// Stage helpers shared by the experiment driver and the CLI stages, so a
// staged run and an experiment cell go through identical code.

/// The training interactions a run actually sees after sparsification.
Interactions effective_train(const Dataset& ds, double keep_fraction, std::uint64_t seed);

/// The matrix ALS is fitted to: SPPMI or co-occurrence for the walk-based
/// methods (from `stats`), the binary training matrix for plain MF.
ConfidenceMatrix target_matrix(Method method, const PairCorpusStats* stats, std::span<const Interaction> train,
                               std::size_t num_users, std::size_t num_items, double shift_k);

/// Ranked lists from the fitted model, or from popularity for ItemPop (`model` unused).
std::vector<RankedList> recommend_for(Method method, const FactorModel* model, std::span<const Interaction> train,
                                      std::size_t num_users, std::size_t num_items, std::size_t k_items,
                                      bool mask_train);

/// Runs every grid cell end to end. Within one (seed, keep_fraction) the walk
/// corpus is generated once and reused for every window size and method.
/// Evaluation always uses the unsparsified test split.
std::vector<ExperimentRow> run_experiment(const Dataset& ds, const PipelineConfig& cfg);

/// Tab-separated table: configuration columns, then P/R/F1 per cutoff as
/// percentages with three decimals.
void write_report_tsv(std::ostream& out, const PipelineConfig& cfg, std::span<const ExperimentRow> rows);

/// Same rows plus the complete resolved configuration.
nlohmann::json report_json(const PipelineConfig& cfg, std::span<const ExperimentRow> rows);

}  // namespace psirec
