// psirec: staged pseudo-implicit feedback pipeline.
//
//   ingest -> split -> walk -> pairs -> confidence -> train -> recommend -> evaluate
//
// Every stage reads its inputs from and writes its outputs to the work
// directory; `experiment` runs the whole configured grid in one go.

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "psirec/config.hpp"
#include "psirec/error.hpp"
#include "psirec/experiment.hpp"
#include "psirec/graph.hpp"
#include "psirec/synthetic.hpp"
#include "psirec/text_io.hpp"

namespace fs = std::filesystem;
using namespace psirec;

namespace {

struct Paths {
  fs::path root;
  fs::path interactions() const { return root / "interactions.tsv"; }
  fs::path dataset() const { return root / "dataset"; }
  fs::path walks() const { return root / "walks.txt"; }
  fs::path pairs() const { return root / "pairs.tsv"; }
  fs::path confidence() const { return root / "confidence.tsv"; }
  fs::path model() const { return root / "model.txt"; }
  fs::path recommendations() const { return root / "recommendations.tsv"; }
};

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
  auto out = open_output(path);
  fn(out);
  out.flush();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

template <class T, class Fn>
T read_file(const fs::path& path, Fn&& fn) {
  auto in = open_input(path);
  return fn(in);
}

void require_walks(const PipelineConfig& cfg, const char* stage) {
  if (!uses_walks(cfg.method)) {
    throw Error(std::string("stage '") + stage + "' is not used by method " + std::string(to_string(cfg.method)));
  }
}

std::vector<KeyPair> prepare_pairs(const PipelineConfig& cfg) {
  if (cfg.input.empty()) throw Error("missing config key 'data.input'");
  const auto raws = ingest_file(cfg.input, cfg.format);
  return filter_min_interactions(binarize(raws), cfg.min_interactions);
}

void stage_ingest(const PipelineConfig& cfg, const Paths& p) {
  const auto pairs = prepare_pairs(cfg);
  write_file(p.interactions(), [&](std::ostream& out) { write_key_pairs(out, pairs); });
  std::cout << "ingest: " << pairs.size() << " interactions -> " << p.interactions().string() << '\n';
}

void stage_split(const PipelineConfig& cfg, const Paths& p) {
  const auto pairs = read_file<std::vector<KeyPair>>(p.interactions(), read_key_pairs);
  const auto ds = split(pairs, cfg.split, cfg.split_seed);
  save_dataset(ds, p.dataset());
  std::cout << "split: " << ds.num_users() << " users, " << ds.num_items() << " items, train/valid/test "
            << ds.train.size() << '/' << ds.valid.size() << '/' << ds.test.size() << '\n';
}

void stage_walk(const PipelineConfig& cfg, const Paths& p) {
  require_walks(cfg, "walk");
  const auto ds = load_dataset(p.dataset());
  const auto train = effective_train(ds, cfg.keep_fraction, cfg.seed);
  const auto corpus = generate_walks(build_graph(train, ds.num_users(), ds.num_items()), cfg.walk_config(cfg.seed));
  write_file(p.walks(), [&](std::ostream& out) { write_corpus(out, corpus); });
  std::cout << "walk: " << corpus.size() << " walks\n";
}

void stage_pairs(const PipelineConfig& cfg, const Paths& p) {
  require_walks(cfg, "pairs");
  const auto ds = load_dataset(p.dataset());
  const auto corpus = read_file<WalkCorpus>(p.walks(), read_corpus);
  const auto stats = sample_pairs(corpus, cfg.sigma, ds.num_users(), ds.num_items());
  write_file(p.pairs(), [&](std::ostream& out) { write_stats(out, stats); });
  std::cout << "pairs: |C| = " << stats.total() << ", " << stats.pairs().size() << " distinct pairs\n";
}

void stage_confidence(const PipelineConfig& cfg, const Paths& p) {
  if (!uses_factors(cfg.method)) throw Error("stage 'confidence' is not used by method itempop");
  const auto ds = load_dataset(p.dataset());
  const auto train = effective_train(ds, cfg.keep_fraction, cfg.seed);
  std::optional<PairCorpusStats> stats;
  if (uses_walks(cfg.method)) stats = read_file<PairCorpusStats>(p.pairs(), read_stats);
  const auto s = target_matrix(cfg.method, stats ? &*stats : nullptr, train, ds.num_users(), ds.num_items(),
                               cfg.shift_k);
  write_file(p.confidence(), [&](std::ostream& out) { write_confidence(out, s); });
  std::cout << "confidence: " << s.nnz() << " non-zero entries (" << to_string(s.measure()) << ")\n";
}

void stage_train(const PipelineConfig& cfg, const Paths& p) {
  if (!uses_factors(cfg.method)) throw Error("stage 'train' is not used by method itempop");
  const auto s = read_file<ConfidenceMatrix>(p.confidence(), read_confidence);
  const auto model = als_fit(s, cfg.als_config(cfg.seed));
  write_file(p.model(), [&](std::ostream& out) { write_model(out, model); });
  std::cout << "train: final objective " << format_shortest(model.loss_trace.back()) << " after " << cfg.sweeps
            << " sweeps\n";
}

void stage_recommend(const PipelineConfig& cfg, const Paths& p) {
  const auto ds = load_dataset(p.dataset());
  const auto train = effective_train(ds, cfg.keep_fraction, cfg.seed);
  std::optional<FactorModel> model;
  if (uses_factors(cfg.method)) model = read_file<FactorModel>(p.model(), read_model);
  const auto lists = recommend_for(cfg.method, model ? &*model : nullptr, train, ds.num_users(), ds.num_items(),
                                   cfg.k_items, cfg.mask_train);
  write_file(p.recommendations(), [&](std::ostream& out) { write_recommendations(out, lists); });
  std::cout << "recommend: top-" << cfg.k_items << " lists for " << lists.size() << " users\n";
}

void write_reports(const PipelineConfig& cfg, const fs::path& stem, std::span<const ExperimentRow> rows) {
  const fs::path tsv = stem.string() + ".tsv";
  const fs::path js = stem.string() + ".json";
  write_file(tsv, [&](std::ostream& out) { write_report_tsv(out, cfg, rows); });
  write_file(js, [&](std::ostream& out) { out << report_json(cfg, rows).dump(2) << '\n'; });
  write_report_tsv(std::cout, cfg, rows);
  std::cout << "report: " << tsv.string() << ", " << js.string() << '\n';
}

void stage_evaluate(const PipelineConfig& cfg, const Paths& p) {
  const auto ds = load_dataset(p.dataset());
  const auto lists = read_file<std::vector<RankedList>>(p.recommendations(), read_recommendations);
  ExperimentRow row;
  row.method = cfg.method;
  row.seed = cfg.seed;
  row.keep_fraction = cfg.keep_fraction;
  if (uses_walks(cfg.method)) row.sigma = cfg.sigma;
  row.metrics = evaluate(lists, ds.test, ds.num_users(), cfg.cutoffs);
  write_reports(cfg, p.root / "report", std::span(&row, 1));
}

void stage_experiment(const PipelineConfig& cfg, const Paths& p) {
  const auto ds = split(prepare_pairs(cfg), cfg.split, cfg.split_seed);
  const auto rows = run_experiment(ds, cfg);
  write_reports(cfg, p.root / "experiment", rows);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-implicit feedback recommender: random walks, shifted-PMI confidence and ALS"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> workdir;
  app.add_option("-c,--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "Override the run seed (and the experiment seed list)");
  app.add_option("-j,--workers", workers, "Worker threads (0: OpenMP default)");
  app.add_option("-w,--workdir", workdir, "Directory for stage inputs and outputs");

  using Stage = std::function<void(const PipelineConfig&, const Paths&)>;
  const std::vector<std::tuple<std::string, std::string, Stage>> stages = {
      {"ingest", "Read, binarize and filter the raw interaction log", stage_ingest},
      {"split", "Split interactions into train/valid/test and index them", stage_split},
      {"walk", "Generate the random-walk corpus from the training graph", stage_walk},
      {"pairs", "Extract windowed user-item pairs from the walks", stage_pairs},
      {"confidence", "Build the pseudo-implicit feedback matrix", stage_confidence},
      {"train", "Fit user and item factors by alternating least squares", stage_train},
      {"recommend", "Write top-k lists for every user", stage_recommend},
      {"evaluate", "Score recommendations against the test split", stage_evaluate},
      {"experiment", "Run the configured experiment grid end to end", stage_experiment},
  };
  std::map<CLI::App*, Stage> handlers;
  for (const auto& [name, help, fn] : stages) handlers[app.add_subcommand(name, help)] = fn;

  SyntheticConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a block-structured synthetic interaction CSV");
  synth_cmd->add_option("--users", synth.users)->capture_default_str();
  synth_cmd->add_option("--items", synth.items)->capture_default_str();
  synth_cmd->add_option("--communities", synth.communities)->capture_default_str();
  synth_cmd->add_option("--p-in", synth.p_in)->capture_default_str();
  synth_cmd->add_option("--p-out", synth.p_out)->capture_default_str();
  synth_cmd->add_option("--popularity-skew", synth.popularity_skew)->capture_default_str();
  synth_cmd->add_option("--mean-interactions", synth.mean_interactions)->capture_default_str();
  synth_cmd->add_option("--activity-spread", synth.activity_spread)->capture_default_str();
  synth_cmd->add_option("-o,--out", synth_out, "Output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  const std::string stage = chosen->get_name();

  if (chosen == synth_cmd) {
    try {
      if (seed) synth.seed = *seed;
      const auto pairs = generate_synthetic(synth);
      write_file(synth_out, [&](std::ostream& out) { write_synthetic_csv(out, pairs); });
      std::cout << "synth: " << pairs.size() << " interactions -> " << synth_out << '\n';
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "psirec synth: error: " << e.what() << '\n';
      return 1;
    }
  }

  PipelineConfig cfg;
  try {
    if (!config_path.empty()) cfg = PipelineConfig::load(config_path);
    if (seed) {
      cfg.seed = *seed;
      cfg.grid.seeds.clear();
    }
    if (workers) cfg.workers = *workers;
    if (workdir) cfg.workdir = *workdir;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "psirec: config error: " << e.what() << '\n';
    return 2;
  }
  if (cfg.workers > 0) omp_set_num_threads(cfg.workers);

  try {
    handlers.at(chosen)(cfg, Paths{cfg.workdir});
  } catch (const std::exception& e) {
    std::cerr << "psirec " << stage << ": error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
