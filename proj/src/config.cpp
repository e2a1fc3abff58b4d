#include "cogload/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "cogload/error.hpp"
#include "cogload/random.hpp"

namespace cogload {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::InvalidConfig, key + ": " + why);
}

std::string path_of(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& j, const std::string& prefix, std::initializer_list<const char*> known) {
  if (!j.is_object()) bad(prefix.empty() ? "config" : prefix, "expected an object");
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) bad(path_of(prefix, key), "unknown key");
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) bad(key, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) bad(key, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& key) {
  if (!j.is_boolean()) bad(key, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) bad(key, "expected a string");
  return j.get<std::string>();
}

template <class T, class Fn>
std::vector<T> get_list(const json& j, const std::string& key, Fn&& item) {
  if (!j.is_array()) bad(key, "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(item(j[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> number_list(const json& j, const std::string& key) {
  return get_list<double>(j, key, get_number);
}

std::vector<int> int_list(const json& j, const std::string& key) { return get_list<int>(j, key, get_int); }

void read_cleaning(const json& j, CleaningConfig& c) {
  reject_unknown(j, "cleaning",
                 {"blink_guard_s", "min_confidence", "butter_order", "butter_cutoff_hz", "pupil_rate_hz", "sma_k_eda",
                  "sma_k_hr"});
  for (const auto& [key, v] : j.items()) {
    const auto name = "cleaning." + key;
    if (key == "blink_guard_s") c.blink_guard_s = get_number(v, name);
    if (key == "min_confidence") c.min_confidence = get_number(v, name);
    if (key == "butter_order") c.butter_order = get_int(v, name);
    if (key == "butter_cutoff_hz") c.butter_cutoff_hz = get_number(v, name);
    if (key == "pupil_rate_hz") c.pupil_rate_hz = get_number(v, name);
    if (key == "sma_k_eda") c.sma_k_eda = get_int(v, name);
    if (key == "sma_k_hr") c.sma_k_hr = get_int(v, name);
  }
}

void read_labels(const json& j, LabelConfig& c) {
  reject_unknown(j, "labels", {"edges", "mapping"});
  if (j.contains("edges")) {
    const auto edges = number_list(j["edges"], "labels.edges");
    if (edges.size() != 2) bad("labels.edges", "expected two numbers");
    c.edges.low_moderate = edges[0];
    c.edges.moderate_high = edges[1];
  }
  if (j.contains("mapping")) {
    const auto& m = j["mapping"];
    reject_unknown(m, "labels.mapping", {"intrinsic", "extraneous", "germane", "overall"});
    if (m.contains("intrinsic")) c.mapping.intrinsic = int_list(m["intrinsic"], "labels.mapping.intrinsic");
    if (m.contains("extraneous")) c.mapping.extraneous = int_list(m["extraneous"], "labels.mapping.extraneous");
    if (m.contains("germane")) c.mapping.germane = int_list(m["germane"], "labels.mapping.germane");
    if (m.contains("overall")) c.mapping.overall = int_list(m["overall"], "labels.mapping.overall");
  }
}

void read_grid(const json& j, GridSpace& g) {
  reject_unknown(j, "grid", {"nb_alpha", "dt_criterion", "svm_linear_C", "svm_rbf_C", "logreg_C", "rf_n_trees"});
  if (j.contains("nb_alpha")) g.nb_alpha = number_list(j["nb_alpha"], "grid.nb_alpha");
  if (j.contains("dt_criterion")) {
    g.dt_criterion = get_list<Criterion>(j["dt_criterion"], "grid.dt_criterion", [](const json& v, const std::string& k) {
      auto c = parse_criterion(get_string(v, k));
      if (!c) bad(k, "expected gini or entropy");
      return *c;
    });
  }
  if (j.contains("svm_linear_C")) g.svm_linear_C = number_list(j["svm_linear_C"], "grid.svm_linear_C");
  if (j.contains("svm_rbf_C")) g.svm_rbf_C = number_list(j["svm_rbf_C"], "grid.svm_rbf_C");
  if (j.contains("logreg_C")) g.logreg_C = number_list(j["logreg_C"], "grid.logreg_C");
  if (j.contains("rf_n_trees")) g.rf_n_trees = int_list(j["rf_n_trees"], "grid.rf_n_trees");
}

}  // namespace

std::string_view to_string(WindowSelection w) {
  return w == WindowSelection::test_kappa ? "test_kappa" : "validation_kappa";
}

void PipelineConfig::validate() const {
  cleaning.validate();
  try {
    labels.edges.validate();
  } catch (const Error& e) {
    bad("labels.edges", "must satisfy 1 < e1 < e2 < 10");
  }
  labels.mapping.validate();
  if (schemas.empty()) bad("schemas", "must be a non-empty list");
  if (kinds.empty()) bad("kinds", "must be a non-empty list");
  split.validate();
  if (cv_folds < 2) bad("cv_folds", "must be at least 2");
  grid.validate();
  for (double a : grid.nb_alpha) {
    if (!(a >= 0.0)) bad("grid.nb_alpha", "values must be >= 0");
  }
  for (const auto* list : {&grid.svm_linear_C, &grid.svm_rbf_C, &grid.logreg_C}) {
    for (double c : *list) {
      if (!(c > 0.0)) bad("grid", "C values must be positive");
    }
  }
  for (int t : grid.rf_n_trees) {
    if (t < 1) bad("grid.rf_n_trees", "values must be >= 1");
  }
  if (windows.empty()) bad("windows", "must be a non-empty list");
  std::set<double> seen;
  for (double w : windows) {
    if (!(w > 0.0)) bad("windows", "values must be positive");
    if (!seen.insert(w).second) bad("windows", "values must be distinct");
  }
  if (output_dir.empty()) bad("output_dir", "must not be empty");
}

SweepConfig PipelineConfig::sweep(unsigned jobs) const {
  SweepConfig s;
  s.schemas = schemas;
  s.kinds = kinds;
  s.split = split;
  s.split.seed = derive_seed(seed, 0x5EED);
  s.cv_folds = cv_folds;
  s.grid = grid;
  s.selection = window_selection;
  s.nb_variant = nb_variant;
  s.seed = seed;
  s.jobs = jobs;
  return s;
}

PipelineConfig config_from_json(const json& j) {
  reject_unknown(j, "",
                 {"cleaning", "labels", "features", "schemas", "kinds", "split", "cv_folds", "grid", "windows",
                  "window_selection", "nb_variant", "mcnemar_continuity_correction", "seed", "output_dir"});
  PipelineConfig c;
  if (j.contains("cleaning")) read_cleaning(j["cleaning"], c.cleaning);
  if (j.contains("labels")) read_labels(j["labels"], c.labels);
  if (j.contains("features")) {
    const auto& f = j["features"];
    reject_unknown(f, "features", {"unimodal_include_ipa", "multimodal_include_ipa"});
    if (f.contains("unimodal_include_ipa")) {
      c.features.unimodal_include_ipa = get_bool(f["unimodal_include_ipa"], "features.unimodal_include_ipa");
    }
    if (f.contains("multimodal_include_ipa")) {
      c.features.multimodal_include_ipa = get_bool(f["multimodal_include_ipa"], "features.multimodal_include_ipa");
    }
  }
  if (j.contains("schemas")) {
    c.schemas = get_list<Schema>(j["schemas"], "schemas", [](const json& v, const std::string& k) {
      auto s = parse_schema(get_string(v, k));
      if (!s) bad(k, "expected unimodal or multimodal");
      return *s;
    });
  }
  if (j.contains("kinds")) {
    c.kinds = get_list<ClassifierKind>(j["kinds"], "kinds", [](const json& v, const std::string& k) {
      auto kind = parse_kind(get_string(v, k));
      if (!kind) bad(k, "expected one of nb, dt, svm_linear, svm_rbf, logreg, rf");
      return *kind;
    });
  }
  if (j.contains("split")) {
    const auto& s = j["split"];
    reject_unknown(s, "split", {"train_fraction", "stratified", "group_by_participant"});
    if (s.contains("train_fraction")) c.split.train_fraction = get_number(s["train_fraction"], "split.train_fraction");
    if (s.contains("stratified")) c.split.stratified = get_bool(s["stratified"], "split.stratified");
    if (s.contains("group_by_participant")) {
      c.split.group_by_participant = get_bool(s["group_by_participant"], "split.group_by_participant");
    }
  }
  if (j.contains("cv_folds")) c.cv_folds = get_int(j["cv_folds"], "cv_folds");
  if (j.contains("grid")) read_grid(j["grid"], c.grid);
  if (j.contains("windows")) c.windows = number_list(j["windows"], "windows");
  if (j.contains("window_selection")) {
    const auto w = get_string(j["window_selection"], "window_selection");
    if (w == "test_kappa") {
      c.window_selection = WindowSelection::test_kappa;
    } else if (w == "validation_kappa") {
      c.window_selection = WindowSelection::validation_kappa;
    } else {
      bad("window_selection", "expected test_kappa or validation_kappa");
    }
  }
  if (j.contains("nb_variant")) {
    const auto v = get_string(j["nb_variant"], "nb_variant");
    if (v == "categorical") {
      c.nb_variant = NaiveBayesVariant::categorical;
    } else if (v == "gaussian") {
      c.nb_variant = NaiveBayesVariant::gaussian;
    } else {
      bad("nb_variant", "expected categorical or gaussian");
    }
  }
  if (j.contains("mcnemar_continuity_correction")) {
    c.mcnemar_continuity_correction = get_bool(j["mcnemar_continuity_correction"], "mcnemar_continuity_correction");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("output_dir")) c.output_dir = get_string(j["output_dir"], "output_dir");
  c.validate();
  return c;
}

ojson to_json(const PipelineConfig& c) {
  ojson j;
  j["cleaning"] = {{"blink_guard_s", c.cleaning.blink_guard_s},
                   {"min_confidence", c.cleaning.min_confidence},
                   {"butter_order", c.cleaning.butter_order},
                   {"butter_cutoff_hz", c.cleaning.butter_cutoff_hz},
                   {"pupil_rate_hz", c.cleaning.pupil_rate_hz},
                   {"sma_k_eda", c.cleaning.sma_k_eda},
                   {"sma_k_hr", c.cleaning.sma_k_hr}};
  ojson mapping;
  mapping["intrinsic"] = c.labels.mapping.intrinsic;
  mapping["extraneous"] = c.labels.mapping.extraneous;
  mapping["germane"] = c.labels.mapping.germane;
  mapping["overall"] = c.labels.mapping.overall;
  j["labels"] = {{"edges", {c.labels.edges.low_moderate, c.labels.edges.moderate_high}}, {"mapping", mapping}};
  j["features"] = {{"unimodal_include_ipa", c.features.unimodal_include_ipa},
                   {"multimodal_include_ipa", c.features.multimodal_include_ipa}};
  ojson schemas = ojson::array(), kinds = ojson::array(), criteria = ojson::array();
  for (auto s : c.schemas) schemas.push_back(to_string(s));
  for (auto k : c.kinds) kinds.push_back(to_string(k));
  for (auto cr : c.grid.dt_criterion) criteria.push_back(to_string(cr));
  j["schemas"] = schemas;
  j["kinds"] = kinds;
  j["split"] = {{"train_fraction", c.split.train_fraction},
                {"stratified", c.split.stratified},
                {"group_by_participant", c.split.group_by_participant}};
  j["cv_folds"] = c.cv_folds;
  ojson grid;
  grid["nb_alpha"] = c.grid.nb_alpha;
  grid["dt_criterion"] = criteria;
  grid["svm_linear_C"] = c.grid.svm_linear_C;
  grid["svm_rbf_C"] = c.grid.svm_rbf_C;
  grid["logreg_C"] = c.grid.logreg_C;
  grid["rf_n_trees"] = c.grid.rf_n_trees;
  j["grid"] = grid;
  j["windows"] = c.windows;
  j["window_selection"] = to_string(c.window_selection);
  j["nb_variant"] = c.nb_variant == NaiveBayesVariant::gaussian ? "gaussian" : "categorical";
  j["mcnemar_continuity_correction"] = c.mcnemar_continuity_correction;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingFile, path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_hash(const PipelineConfig& c) {
  auto j = to_json(c);
  j.erase("output_dir");
  return fnv1a_hex(j.dump());
}

}  // namespace cogload
