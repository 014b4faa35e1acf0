#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "psirec/dataset.hpp"
#include "psirec/factorization.hpp"
#include "psirec/walks.hpp"

namespace psirec {

enum class Method : std::uint8_t {
  kPsiRecPmi,            // walks -> SPPMI -> ALS
  kPsiRecCo,             // walks -> co-occurrence counts -> ALS
  kMatrixFactorization,  // ALS directly on the binary training matrix
  kItemPop,              // training popularity
};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);
bool uses_walks(Method m);
bool uses_factors(Method m);

struct ExperimentGrid {
  std::vector<Method> methods;
  std::vector<std::size_t> sigmas;
  std::vector<double> keep_fractions;
  std::vector<std::uint64_t> seeds;
};

/// Everything a run needs. Defaults: beta = 10, gamma = 80, sigma = 3,
/// lambda = 0.25, K = 100, top-10 lists.
struct PipelineConfig {
  // data
  std::string input;
  TextFormat format;
  std::size_t min_interactions = 0;
  SplitRatios split;
  std::uint64_t split_seed = 1;

  /// Drives sparsification, walks and factor initialisation.
  std::uint64_t seed = 1;
  double keep_fraction = 1.0;

  std::size_t beta = 10;
  std::size_t gamma = 80;
  std::size_t sigma = 3;

  Method method = Method::kPsiRecPmi;
  double shift_k = 1.0;

  std::size_t factors = 100;
  double lambda = 0.25;
  std::size_t sweeps = 15;
  double init_scale = 0.01;

  std::size_t k_items = 10;
  bool mask_train = true;
  std::vector<std::size_t> cutoffs{5, 10};

  /// Empty lists fall back to the single-run values above.
  ExperimentGrid grid;

  std::string workdir = "run";
  int workers = 0;  // 0: OpenMP default

  WalkConfig walk_config(std::uint64_t run_seed) const;
  AlsConfig als_config(std::uint64_t run_seed) const;
  ExperimentGrid resolved_grid() const;

  /// Throws Error naming the first offending key.
  void validate() const;

  nlohmann::json to_json() const;
  /// Unknown keys and wrongly typed values are errors that name the key.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::filesystem::path& path);
};

}  // namespace psirec
