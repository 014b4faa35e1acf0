#include "psirec/experiment.hpp"

#include <algorithm>
#include <map>
#include <ostream>

#include "psirec/error.hpp"
#include "psirec/graph.hpp"
#include "psirec/text_io.hpp"
#include "psirec/walks.hpp"

namespace psirec {

Interactions effective_train(const Dataset& ds, double keep_fraction, std::uint64_t seed) {
  return sparsify(ds.train, keep_fraction, seed);
}

ConfidenceMatrix target_matrix(Method method, const PairCorpusStats* stats, std::span<const Interaction> train,
                               std::size_t num_users, std::size_t num_items, double shift_k) {
  switch (method) {
    case Method::kPsiRecPmi:
    case Method::kPsiRecCo:
      if (stats == nullptr) throw Error("pair statistics are required for " + std::string(to_string(method)));
      return method == Method::kPsiRecPmi ? sppmi_matrix(*stats, shift_k) : co_matrix(*stats);
    case Method::kMatrixFactorization:
      return binary_matrix(train, num_users, num_items);
    case Method::kItemPop:
      break;
  }
  throw Error("method itempop does not fit a model");
}

std::vector<RankedList> recommend_for(Method method, const FactorModel* model, std::span<const Interaction> train,
                                      std::size_t num_users, std::size_t num_items, std::size_t k_items,
                                      bool mask_train) {
  if (method == Method::kItemPop) {
    return recommend_all(popularity_scorer(item_pop_scores(train, num_items)), num_users, num_items, train,
                         k_items, mask_train);
  }
  if (model == nullptr) throw Error("a fitted model is required for " + std::string(to_string(method)));
  if (model->num_users() != num_users || model->num_items() != num_items) {
    throw Error("model dimensions do not match the dataset");
  }
  return recommend_all(factor_scorer(*model), num_users, num_items, train, k_items, mask_train);
}

std::vector<ExperimentRow> run_experiment(const Dataset& ds, const PipelineConfig& cfg) {
  cfg.validate();
  const auto grid = cfg.resolved_grid();
  const auto m = ds.num_users(), n = ds.num_items();
  const bool any_walks = std::any_of(grid.methods.begin(), grid.methods.end(), uses_walks);

  std::vector<ExperimentRow> rows;
  for (const auto seed : grid.seeds) {
    for (const auto keep : grid.keep_fractions) {
      const auto train = effective_train(ds, keep, seed);
      WalkCorpus corpus;
      std::map<std::size_t, PairCorpusStats> stats_by_sigma;
      if (any_walks) {
        corpus = generate_walks(build_graph(train, m, n), cfg.walk_config(seed));
        for (auto sigma : grid.sigmas) {
          if (!stats_by_sigma.count(sigma)) stats_by_sigma.emplace(sigma, sample_pairs(corpus, sigma, m, n));
        }
      }

      auto run_cell = [&](Method method, std::optional<std::size_t> sigma) {
        std::optional<FactorModel> model;
        if (uses_factors(method)) {
          const auto* stats = sigma ? &stats_by_sigma.at(*sigma) : nullptr;
          model = als_fit(target_matrix(method, stats, train, m, n, cfg.shift_k), cfg.als_config(seed));
        }
        const auto recs = recommend_for(method, model ? &*model : nullptr, train, m, n, cfg.k_items, cfg.mask_train);
        rows.push_back({method, seed, keep, sigma, evaluate(recs, ds.test, m, cfg.cutoffs)});
      };

      for (const auto method : grid.methods) {
        if (uses_walks(method)) {
          for (auto sigma : grid.sigmas) run_cell(method, sigma);
        } else {
          run_cell(method, std::nullopt);
        }
      }
    }
  }
  return rows;
}

void write_report_tsv(std::ostream& out, const PipelineConfig& cfg, std::span<const ExperimentRow> rows) {
  out << "method\tseed\tkeep_fraction\tbeta\tgamma\tsigma\tshift_k\tfactors\tlambda\tsweeps\tinit_scale\tk_items"
         "\tmask_train\tusers";
  for (auto k : cfg.cutoffs) out << "\tP@" << k << "\tR@" << k << "\tF1@" << k;
  out << '\n';
  for (const auto& row : rows) {
    const bool walks = uses_walks(row.method);
    const bool factors = uses_factors(row.method);
    auto opt = [](bool present, const std::string& v) { return present ? v : std::string("-"); };
    out << to_string(row.method) << '\t' << row.seed << '\t' << format_shortest(row.keep_fraction) << '\t'
        << opt(walks, std::to_string(cfg.beta)) << '\t' << opt(walks, std::to_string(cfg.gamma)) << '\t'
        << opt(row.sigma.has_value(), row.sigma ? std::to_string(*row.sigma) : "") << '\t'
        << opt(row.method == Method::kPsiRecPmi, format_shortest(cfg.shift_k)) << '\t'
        << opt(factors, std::to_string(cfg.factors)) << '\t' << opt(factors, format_shortest(cfg.lambda)) << '\t'
        << opt(factors, std::to_string(cfg.sweeps)) << '\t' << opt(factors, format_shortest(cfg.init_scale))
        << '\t' << cfg.k_items << '\t' << (cfg.mask_train ? "true" : "false") << '\t' << row.metrics.user_count;
    for (auto k : cfg.cutoffs) {
      const auto& c = row.metrics.at(k);
      out << '\t' << format_fixed(100.0 * c.precision, 3) << '\t' << format_fixed(100.0 * c.recall, 3) << '\t'
          << format_fixed(100.0 * c.f1, 3);
    }
    out << '\n';
  }
}

nlohmann::json report_json(const PipelineConfig& cfg, std::span<const ExperimentRow> rows) {
  nlohmann::json j;
  j["config"] = cfg.to_json();
  // Execution settings do not affect any result, so they stay out of the echo.
  j["config"].erase("workers");
  j["config"].erase("workdir");
  j["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r;
    r["method"] = std::string(to_string(row.method));
    r["seed"] = row.seed;
    r["keep_fraction"] = row.keep_fraction;
    const bool walks = uses_walks(row.method);
    const bool factors = uses_factors(row.method);
    r["beta"] = walks ? nlohmann::json(cfg.beta) : nlohmann::json();
    r["gamma"] = walks ? nlohmann::json(cfg.gamma) : nlohmann::json();
    r["sigma"] = row.sigma ? nlohmann::json(*row.sigma) : nlohmann::json();
    r["shift_k"] = row.method == Method::kPsiRecPmi ? nlohmann::json(cfg.shift_k) : nlohmann::json();
    r["factors"] = factors ? nlohmann::json(cfg.factors) : nlohmann::json();
    r["lambda"] = factors ? nlohmann::json(cfg.lambda) : nlohmann::json();
    r["sweeps"] = factors ? nlohmann::json(cfg.sweeps) : nlohmann::json();
    r["init_scale"] = factors ? nlohmann::json(cfg.init_scale) : nlohmann::json();
    r["k_items"] = cfg.k_items;
    r["mask_train"] = cfg.mask_train;
    r["users"] = row.metrics.user_count;
    for (const auto& c : row.metrics.cutoffs) {
      const auto k = std::to_string(c.k);
      r["P@" + k] = c.precision;
      r["R@" + k] = c.recall;
      r["F1@" + k] = c.f1;
    }
    j["rows"].push_back(std::move(r));
  }
  return j;
}

}  // namespace psirec
