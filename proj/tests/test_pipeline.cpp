#include <doctest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "cogload/config.hpp"
#include "cogload/error.hpp"
#include "cogload/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace cogload;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    config_from_json(nlohmann::json::parse(text));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidConfig);
    return e.what();
  }
  FAIL("expected an error for " << text);
  return {};
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::istringstream in(fixture::read_file(p));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

PredictionSet prediction_set(const std::string& name, const std::vector<std::string>& ids,
                             const std::vector<Level>& truth, const std::vector<Level>& pred) {
  return PredictionSet{name, ids, truth, pred};
}

PipelineConfig quick_config() {
  PipelineConfig cfg;
  cfg.windows = {60, 120};
  cfg.seed = 2;
  cfg.grid.rf_n_trees = {20};
  return cfg;
}

}  // namespace

TEST_CASE("config defaults and JSON round trip") {
  const auto c = config_from_json(nlohmann::json::object());
  CHECK(c.windows == std::vector<double>{30, 60, 90, 120, 150, 180, 210});
  CHECK(c.cv_folds == 4);
  CHECK(c.split.train_fraction == 0.8);
  CHECK(c.cleaning.butter_order == 3);
  CHECK(c.cleaning.butter_cutoff_hz == 4.0);
  CHECK(c.kinds.size() == 6);
  CHECK(c.grid.total_cells() == 20);

  PipelineConfig d;
  d.windows = {45, 90};
  d.labels.edges = {3.5, 6.5};
  d.window_selection = WindowSelection::validation_kappa;
  d.nb_variant = NaiveBayesVariant::gaussian;
  d.seed = 77;
  const auto back = config_from_json(nlohmann::json::parse(to_json(d).dump()));
  CHECK(to_json(back).dump() == to_json(d).dump());
  CHECK(config_hash(back) == config_hash(d));
}

TEST_CASE("config errors name the dotted key") {
  CHECK(config_error(R"({"grid":{"foo":[1]}})").find("grid.foo") != std::string::npos);
  CHECK(config_error(R"({"cleaning":{"sma_k_hr":2}})").find("cleaning.sma_k_hr") != std::string::npos);
  CHECK(config_error(R"({"labels":{"edges":[7,4]}})").find("labels.edges") != std::string::npos);
  CHECK(config_error(R"({"windows":[30,"x"]})").find("windows[1]") != std::string::npos);
  CHECK(config_error(R"({"kinds":["knn"]})").find("kinds[0]") != std::string::npos);
  CHECK(config_error(R"({"split":{"train_fraction":1.5}})").find("train_fraction") != std::string::npos);
  CHECK(config_error(R"({"seed":-1})").find("seed") != std::string::npos);
  CHECK(config_error(R"({"window_selection":"best"})").find("window_selection") != std::string::npos);
  CHECK(config_error(R"({"labels":{"mapping":{"overall":[9]}}})").find("labels.mapping.overall") !=
        std::string::npos);
}

TEST_CASE("config hash ignores the output directory only") {
  PipelineConfig a, b;
  b.output_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("paired predictions are aligned by segment id") {
  const auto a = prediction_set("a", {"s1", "s2", "s3", "s4"}, {Level::low, Level::high, Level::low, Level::moderate},
                                {Level::low, Level::high, Level::high, Level::moderate});
  const auto b = prediction_set("b", {"s4", "s2", "s9"}, {Level::moderate, Level::high, Level::low},
                                {Level::low, Level::high, Level::low});
  const auto [x, y] = align(a, b);
  CHECK(x.ids == std::vector<std::string>{"s2", "s4"});
  CHECK(y.ids == x.ids);
  CHECK(y.predictions == std::vector<Level>{Level::high, Level::low});
  auto bad = b;
  bad.truth[1] = Level::low;
  CHECK_THROWS_AS(align(a, bad), Error);

  const auto cmp = compare(a, b, {});
  CHECK(cmp.n == 2);
  CHECK(cmp.model_a == "a");
  const auto q = cochran("all", {a, b, a});
  CHECK(q.n == 2);
  CHECK(q.k == 3);
}

TEST_CASE("prediction files round trip") {
  const auto dir = fixture::temp_dir("predictions");
  const auto p = prediction_set("multimodal_rf", {"P01#0", "P02#3"}, {Level::low, Level::high},
                                {Level::moderate, Level::high});
  write_predictions(p, dir / "predictions_multimodal_rf.csv", "cogload test");
  const auto back = load_predictions(dir / "predictions_multimodal_rf.csv");
  CHECK(back.model == "multimodal_rf");
  CHECK(back.ids == p.ids);
  CHECK(back.truth == p.truth);
  CHECK(back.predictions == p.predictions);
  CHECK(lines_of(dir / "predictions_multimodal_rf.csv")[0] == "# cogload test");
  CHECK(model_name(Schema::unimodal, ClassifierKind::svm_rbf) == "unimodal_svm_rbf");
}

TEST_CASE("run writes every output with provenance") {
  GeneratorParams p;
  p.n_participants = 8;
  p.session_minutes = 30;
  const auto root = fixture::temp_dir("run");
  write_cohort(p, root / "data", 2);
  CHECK(find_manifests(root / "data").size() == 8);
  CHECK(fs::exists(root / "data" / "params.json"));
  CHECK(fs::exists(root / "data" / "P01" / "truth.csv"));

  auto cfg = quick_config();
  const auto result = run_pipeline(cfg, RunOptions{root / "data", root / "out", 2, nullptr});
  const auto out = root / "out";
  CHECK_FALSE(fs::exists(out / "INCOMPLETE"));
  const std::string stamp = provenance(config_hash(cfg), cfg.seed);
  CHECK(stamp == "cogload config_hash=" + config_hash(cfg) + " seed=2");
  std::size_t csvs = 0;
  for (const auto& e : fs::directory_iterator(out)) {
    if (e.path().extension() != ".csv") continue;
    ++csvs;
    CHECK(lines_of(e.path()).at(0) == "# " + stamp);
  }
  CHECK(csvs == 12 + 7);
  CHECK(lines_of(out / "report.md").at(0) == "<!-- " + stamp + " -->");

  const auto sweep = lines_of(out / "sweep.csv");
  CHECK(sweep.at(1) == "schema,kind,kappa,accuracy,window_s,hyperparameters");
  CHECK(sweep.size() == 2 + 12);
  CHECK(result.sweep.flagged().size() == 12);

  // report table has the 12 flagged rows
  const auto report = lines_of(out / "report.md");
  std::size_t table_rows = 0;
  bool in_table = false;
  for (const auto& l : report) {
    if (l.rfind("## ", 0) == 0) in_table = l == "## Model performance and window size";
    if (in_table && (l.rfind("| unimodal |", 0) == 0 || l.rfind("| multimodal |", 0) == 0)) ++table_rows;
  }
  CHECK(table_rows == 12);

  std::map<std::string, double> sums;
  const auto imp = lines_of(out / "importances.csv");
  for (std::size_t i = 2; i < imp.size(); ++i) {
    const auto model = imp[i].substr(0, imp[i].find(','));
    sums[model] += std::stod(imp[i].substr(imp[i].rfind(',') + 1));
  }
  REQUIRE(sums.size() == 2);
  for (const auto& [m, s] : sums) CHECK(s == doctest::Approx(1.0));

  const auto cmp = lines_of(out / "comparisons.csv");
  CHECK(cmp.at(1) == "model_a,model_b,chi2,p,eta2");
  CHECK(cmp.size() == 2 + 15 + 15 + 6);
  bool rf_contrast = false;
  for (const auto& l : cmp) rf_contrast = rf_contrast || l.rfind("multimodal_rf,unimodal_rf,", 0) == 0;
  CHECK(rf_contrast);
  CHECK(fs::exists(out / "models" / "multimodal_rf.json"));
  const auto model = load_model(out / "models" / "multimodal_rf.json");
  CHECK(model.spec.kind == ClassifierKind::rf);
}

TEST_CASE("feature extraction writes one row per kept segment") {
  GeneratorParams p;
  p.n_participants = 3;
  p.session_minutes = 20;
  const auto root = fixture::temp_dir("extract");
  write_cohort(p, root / "data", 1);
  auto cfg = quick_config();
  const auto rows = extract_features(cfg, Schema::unimodal, RunOptions{root / "data", root / "out", 1, nullptr});
  const auto lines = lines_of(root / "out" / "features.csv");
  CHECK(lines.size() == rows + 2);
  CHECK(lines.at(1) == "segment_id,participant_id,window_s,label,AvgPD,MaxPD,MinPD,AvgPV,MaxPV,MaxPC,PCF,IPA");
  const auto data = build_datasets(find_manifests(root / "data"), cfg, 1);
  CHECK(rows == data.windows[0].size() + data.windows[1].size());
}

TEST_CASE("missing data directory") {
  auto cfg = quick_config();
  const auto root = fixture::temp_dir("missing");
  CHECK_THROWS_AS(run_pipeline(cfg, RunOptions{root / "nope", root / "out", 1, nullptr}), Error);
}
