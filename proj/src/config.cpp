#include "psirec/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "psirec/error.hpp"
#include "psirec/text_io.hpp"

namespace psirec {

using nlohmann::json;

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kPsiRecPmi: return "psirec-pmi";
    case Method::kPsiRecCo: return "psirec-co";
    case Method::kMatrixFactorization: return "mf";
    case Method::kItemPop: return "itempop";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::kPsiRecPmi, Method::kPsiRecCo, Method::kMatrixFactorization, Method::kItemPop}) {
    if (to_string(m) == name) return m;
  }
  throw Error("unknown method '" + std::string(name) + "' (expected psirec-pmi, psirec-co, mf or itempop)");
}

bool uses_walks(Method m) { return m == Method::kPsiRecPmi || m == Method::kPsiRecCo; }
bool uses_factors(Method m) { return m != Method::kItemPop; }

WalkConfig PipelineConfig::walk_config(std::uint64_t run_seed) const { return {beta, gamma, run_seed}; }

AlsConfig PipelineConfig::als_config(std::uint64_t run_seed) const {
  return {factors, lambda, sweeps, run_seed, init_scale};
}

ExperimentGrid PipelineConfig::resolved_grid() const {
  ExperimentGrid g = grid;
  if (g.methods.empty()) g.methods = {method};
  if (g.sigmas.empty()) g.sigmas = {sigma};
  if (g.keep_fractions.empty()) g.keep_fractions = {keep_fraction};
  if (g.seeds.empty()) g.seeds = {seed};
  return g;
}

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw Error("invalid config key '" + key + "': " + why);
}

void check_sigma(const std::string& key, std::size_t s) {
  if (s < 1 || s % 2 == 0) invalid(key, "window size must be odd and >= 1");
}

void check_keep(const std::string& key, double k) {
  if (!(k > 0.0 && k <= 1.0)) invalid(key, "must lie in (0, 1]");
}

}  // namespace

void PipelineConfig::validate() const {
  try {
    format.validate();
  } catch (const Error& e) {
    invalid("data", e.what());
  }
  try {
    split.validate();
  } catch (const Error& e) {
    invalid("split", e.what());
  }
  check_keep("sparsify.keep_fraction", keep_fraction);
  if (beta < 1) invalid("walk.beta", "must be >= 1");
  if (gamma < 1) invalid("walk.gamma", "must be >= 1");
  check_sigma("pairs.sigma", sigma);
  if (!(shift_k >= 1.0) || !std::isfinite(shift_k)) invalid("confidence.shift_k", "must be >= 1");
  if (factors < 1) invalid("als.factors", "must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) invalid("als.lambda", "must be > 0");
  if (sweeps < 1) invalid("als.sweeps", "must be >= 1");
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) invalid("als.init_scale", "must be > 0");
  if (k_items < 1) invalid("recommend.k_items", "must be >= 1");
  if (cutoffs.empty()) invalid("evaluate.cutoffs", "must not be empty");
  for (auto k : cutoffs) {
    if (k < 1) invalid("evaluate.cutoffs", "every cutoff must be >= 1");
  }
  for (auto s : grid.sigmas) check_sigma("experiment.sigmas", s);
  for (auto k : grid.keep_fractions) check_keep("experiment.keep_fractions", k);
  if (workers < 0) invalid("workers", "must be >= 0");
}

json PipelineConfig::to_json() const {
  json j;
  j["data"] = {{"input", input},
               {"delimiter", std::string(1, format.delimiter)},
               {"header", format.header},
               {"user_column", format.user_column},
               {"item_column", format.item_column},
               {"value_column", format.value_column},
               {"timestamp_column", format.timestamp_column},
               {"min_interactions", min_interactions}};
  j["split"] = {{"train", split.train}, {"valid", split.valid}, {"test", split.test}, {"seed", split_seed}};
  j["seed"] = seed;
  j["sparsify"] = {{"keep_fraction", keep_fraction}};
  j["walk"] = {{"beta", beta}, {"gamma", gamma}};
  j["pairs"] = {{"sigma", sigma}};
  j["method"] = std::string(to_string(method));
  j["confidence"] = {{"shift_k", shift_k}};
  j["als"] = {{"factors", factors}, {"lambda", lambda}, {"sweeps", sweeps}, {"init_scale", init_scale}};
  j["recommend"] = {{"k_items", k_items}, {"mask_train", mask_train}};
  j["evaluate"] = {{"cutoffs", cutoffs}};
  json methods = json::array();
  for (auto m : grid.methods) methods.push_back(std::string(to_string(m)));
  j["experiment"] = {{"methods", methods},
                     {"sigmas", grid.sigmas},
                     {"keep_fractions", grid.keep_fractions},
                     {"seeds", grid.seeds}};
  j["workdir"] = workdir;
  j["workers"] = workers;
  return j;
}

namespace {

/// Walks one JSON object, remembering which keys were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) invalid(path_.empty() ? "<root>" : path_, "expected an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    const auto& v = j_.at(key);
    const auto name = qualified(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) invalid(name, "expected true or false");
      out = v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) invalid(name, "expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) invalid(name, "expected a number");
      out = v.get<T>();
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) invalid(name, "expected a non-negative integer");
      out = v.get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) invalid(name, "expected an integer");
      out = v.get<T>();
    } else {
      // vectors
      if (!v.is_array()) invalid(name, "expected an array");
      using E = typename T::value_type;
      T values;
      for (const auto& e : v) {
        if constexpr (std::is_floating_point_v<E>) {
          if (!e.is_number()) invalid(name, "expected numbers");
        } else {
          if (!e.is_number_unsigned()) invalid(name, "expected non-negative integers");
        }
        values.push_back(e.get<E>());
      }
      out = std::move(values);
    }
  }

  Section child(const char* key) {
    used_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, qualified(key));
  }

  bool has(const char* key) const { return j_.contains(key); }
  void mark(const char* key) { used_.insert(key); }

  void reject_unknown() const {
    for (const auto& [k, _] : j_.items()) {
      if (!used_.count(k)) throw Error("unknown config key '" + qualified(k.c_str()) + "'");
    }
  }

  std::string qualified(const char* key) const { return path_.empty() ? key : path_ + "." + key; }
  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  Section root(j, "");

  auto data = root.child("data");
  data.read("input", c.input);
  std::string delimiter(1, c.format.delimiter);
  data.read("delimiter", delimiter);
  if (delimiter == "\\t" || delimiter == "tab") delimiter = "\t";
  if (delimiter.size() != 1) invalid("data.delimiter", "expected a single character");
  c.format.delimiter = delimiter[0];
  data.read("header", c.format.header);
  data.read("user_column", c.format.user_column);
  data.read("item_column", c.format.item_column);
  data.read("value_column", c.format.value_column);
  data.read("timestamp_column", c.format.timestamp_column);
  data.read("min_interactions", c.min_interactions);
  data.reject_unknown();

  auto split = root.child("split");
  split.read("train", c.split.train);
  split.read("valid", c.split.valid);
  split.read("test", c.split.test);
  split.read("seed", c.split_seed);
  split.reject_unknown();

  root.read("seed", c.seed);
  auto sparsify = root.child("sparsify");
  sparsify.read("keep_fraction", c.keep_fraction);
  sparsify.reject_unknown();

  auto walk = root.child("walk");
  walk.read("beta", c.beta);
  walk.read("gamma", c.gamma);
  walk.reject_unknown();

  auto pairs = root.child("pairs");
  pairs.read("sigma", c.sigma);
  pairs.reject_unknown();

  std::string method(to_string(c.method));
  root.read("method", method);
  try {
    c.method = parse_method(method);
  } catch (const Error& e) {
    invalid("method", e.what());
  }

  auto confidence = root.child("confidence");
  confidence.read("shift_k", c.shift_k);
  confidence.reject_unknown();

  auto als = root.child("als");
  als.read("factors", c.factors);
  als.read("lambda", c.lambda);
  als.read("sweeps", c.sweeps);
  als.read("init_scale", c.init_scale);
  als.reject_unknown();

  auto rec = root.child("recommend");
  rec.read("k_items", c.k_items);
  rec.read("mask_train", c.mask_train);
  rec.reject_unknown();

  auto eval = root.child("evaluate");
  eval.read("cutoffs", c.cutoffs);
  eval.reject_unknown();

  auto exp = root.child("experiment");
  if (exp.has("methods")) {
    const auto& ms = exp.raw().at("methods");
    if (!ms.is_array()) invalid("experiment.methods", "expected an array");
    for (const auto& m : ms) {
      if (!m.is_string()) invalid("experiment.methods", "expected method names");
      try {
        c.grid.methods.push_back(parse_method(m.get<std::string>()));
      } catch (const Error& e) {
        invalid("experiment.methods", e.what());
      }
    }
  }
  exp.mark("methods");
  exp.read("sigmas", c.grid.sigmas);
  exp.read("keep_fractions", c.grid.keep_fractions);
  exp.read("seeds", c.grid.seeds);
  exp.reject_unknown();

  root.read("workdir", c.workdir);
  root.read("workers", c.workers);
  root.reject_unknown();

  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

}  // namespace psirec
