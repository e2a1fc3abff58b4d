#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "cogload/error.hpp"
#include "cogload/pipeline.hpp"
#include "cogload/selection.hpp"
#include "support/fixtures.hpp"

using namespace cogload;

namespace {

std::vector<Level> labels_with_counts(std::array<std::size_t, 3> counts, Rng& rng) {
  std::vector<Level> y;
  for (std::size_t c = 0; c < 3; ++c) y.insert(y.end(), counts[c], static_cast<Level>(c));
  shuffle(y, rng);
  return y;
}

std::array<std::size_t, 3> class_counts(std::span<const std::size_t> idx, std::span<const Level> y) {
  std::array<std::size_t, 3> c{};
  for (std::size_t i : idx) ++c[static_cast<std::size_t>(y[i])];
  return c;
}

void check_partition(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, std::size_t n) {
  std::vector<std::size_t> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  REQUIRE(all.size() == n);
  for (std::size_t i = 0; i < n; ++i) CHECK(all[i] == i);
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Empty;
}

}  // namespace

TEST_CASE("312 segments split 250 / 62") {
  Rng rng(1);
  const auto y = labels_with_counts({100, 110, 102}, rng);
  SplitConfig cfg;
  cfg.seed = 7;
  const auto s = split(y, {}, cfg);
  CHECK(s.train.size() == 250);
  CHECK(s.test.size() == 62);
  check_partition(s.train, s.test, y.size());
  CHECK(std::is_sorted(s.train.begin(), s.train.end()));
  CHECK(std::is_sorted(s.test.begin(), s.test.end()));
}

TEST_CASE("stratified split keeps each class within one sample of 80%") {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const std::array<std::size_t, 3> counts{2 + rng.index(60), 2 + rng.index(60), rng.index(2) ? 0 : 2 + rng.index(60)};
    const auto y = labels_with_counts(counts, rng);
    SplitConfig cfg;
    cfg.seed = rng.next();
    const auto s = split(y, {}, cfg);
    check_partition(s.train, s.test, y.size());
    const auto tc = class_counts(s.train, y);
    for (std::size_t c = 0; c < 3; ++c) {
      CHECK(std::abs(static_cast<double>(tc[c]) - 0.8 * static_cast<double>(counts[c])) <= 1.0);
    }
  }
}

TEST_CASE("split is deterministic for a seed and varies with it") {
  Rng rng(3);
  const auto y = labels_with_counts({40, 40, 40}, rng);
  SplitConfig cfg;
  cfg.seed = 11;
  const auto a = split(y, {}, cfg);
  const auto b = split(y, {}, cfg);
  CHECK(a.train == b.train);
  CHECK(a.test == b.test);
  cfg.seed = 12;
  CHECK(split(y, {}, cfg).test != a.test);
}

TEST_CASE("grouped split keeps participants on one side") {
  Rng rng(4);
  std::vector<Level> y;
  std::vector<std::string> groups;
  for (int p = 0; p < 20; ++p) {
    for (int r = 0; r < 9; ++r) {
      groups.push_back("P" + std::to_string(p));
      y.push_back(static_cast<Level>(rng.index(3)));
    }
  }
  SplitConfig cfg;
  cfg.group_by_participant = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const auto s = split(y, groups, cfg);
    check_partition(s.train, s.test, y.size());
    std::set<std::string> tr, te;
    for (std::size_t i : s.train) tr.insert(groups[i]);
    for (std::size_t i : s.test) te.insert(groups[i]);
    for (const auto& g : te) CHECK(tr.count(g) == 0);
    CHECK(te.size() >= 3);
    CHECK(te.size() <= 5);
  }
}

TEST_CASE("split input errors") {
  SplitConfig cfg;
  CHECK(code_of([&] { split(std::vector<Level>(9, Level::low), {}, cfg); }) == ErrorCode::TooFewSamples);
  std::vector<Level> y(20, Level::low);
  y[3] = Level::high;
  CHECK(code_of([&] { split(y, {}, cfg); }) == ErrorCode::UnsatisfiableStratification);
  cfg.stratified = false;
  CHECK_NOTHROW(split(y, {}, cfg));
  cfg.train_fraction = 1.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("four folds over 248 rows") {
  Rng rng(5);
  const auto y = labels_with_counts({80, 90, 78}, rng);
  std::vector<std::size_t> train(248);
  std::iota(train.begin(), train.end(), std::size_t{0});
  const auto folds = kfold(train, y, 4, 9);
  REQUIRE(folds.size() == 4);
  std::vector<std::size_t> all_val;
  for (const auto& f : folds) {
    CHECK(f.val.size() == 62);
    CHECK(f.fit.size() == 186);
    check_partition(f.fit, f.val, 248);
    all_val.insert(all_val.end(), f.val.begin(), f.val.end());
    const auto vc = class_counts(f.val, y);
    const std::array<double, 3> global{80, 90, 78};
    for (std::size_t c = 0; c < 3; ++c) CHECK(std::abs(static_cast<double>(vc[c]) - global[c] / 4.0) <= 1.0);
  }
  std::sort(all_val.begin(), all_val.end());
  CHECK(all_val == train);
  CHECK(kfold(train, y, 4, 9)[2].val == folds[2].val);
}

TEST_CASE("folds of a subset stay within the subset and differ by at most one row") {
  Rng rng(6);
  const auto y = labels_with_counts({30, 25, 19}, rng);
  std::vector<std::size_t> train;
  for (std::size_t i = 0; i < y.size(); i += 1 + rng.index(2)) train.push_back(i);
  for (int k : {2, 3, 4, 5}) {
    const auto folds = kfold(train, y, k, 3);
    std::size_t lo = train.size(), hi = 0;
    std::vector<std::size_t> all;
    for (const auto& f : folds) {
      lo = std::min(lo, f.val.size());
      hi = std::max(hi, f.val.size());
      all.insert(all.end(), f.val.begin(), f.val.end());
    }
    CHECK(hi - lo <= 1);
    std::sort(all.begin(), all.end());
    CHECK(all == train);
  }
  CHECK(code_of([&] { kfold(train, y, 1, 0); }) == ErrorCode::TooFewSamples);
  const std::vector<std::size_t> three{0, 1, 2};
  CHECK(code_of([&] { kfold(three, y, 4, 0); }) == ErrorCode::TooFewSamples);
}

TEST_CASE("grid has 20 cells in canonical order") {
  GridSpace g;
  CHECK(g.total_cells() == 20);
  ClassifierSpec base;
  base.seed = 5;
  const auto cells = grid_cells(ClassifierKind::svm_rbf, g, base);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].C == 0.1);
  CHECK(cells[3].C == 100.0);
  CHECK(cells[0].seed == 5);
  CHECK(grid_cells(ClassifierKind::rf, g, base).back().n_trees == 100);
  CHECK(grid_cells(ClassifierKind::dt, g, base)[1].criterion == Criterion::entropy);
  CHECK(grid_cells(ClassifierKind::nb, g, base).size() == 1);
  g.logreg_C.clear();
  CHECK_THROWS_AS(g.validate(), Error);
}

TEST_CASE("singleton grid returns its only cell") {
  Rng rng(7);
  const auto d = fixture::blobs(20, 3, 2.0, rng);
  std::vector<std::size_t> train(d.y.size());
  std::iota(train.begin(), train.end(), std::size_t{0});
  const auto folds = kfold(train, d.y, 4, 1);
  GridSpace g;
  g.logreg_C = {10.0};
  ClassifierSpec base;
  const auto r = grid_search(ClassifierKind::logreg, g, base, d.X, d.y, folds);
  CHECK(r.best.kind == ClassifierKind::logreg);
  CHECK(r.best.C == 10.0);
  REQUIRE(r.cells.size() == 1);
  CHECK(r.cells[0].fold_kappa.size() == 4);
  CHECK(r.best_kappa == doctest::Approx(*r.cells[0].mean_kappa));
}

TEST_CASE("grid search prefers a smaller C when C = 100 overfits") {
  // Few rows, many noise columns and one weak signal column.
  Rng rng(8);
  Matrix X(0, 40);
  std::vector<Level> y;
  for (int i = 0; i < 60; ++i) {
    const int c = i % 3;
    std::vector<double> row(40);
    for (auto& v : row) v = rng.normal();
    row[0] = 0.8 * c + rng.normal();
    X.append_row(row);
    y.push_back(static_cast<Level>(c));
  }
  std::vector<std::size_t> train(60);
  std::iota(train.begin(), train.end(), std::size_t{0});
  const auto folds = kfold(train, y, 4, 2);
  GridSpace g;
  g.logreg_C = {0.001, 0.01, 0.1, 100.0};
  const auto r = grid_search(ClassifierKind::logreg, g, ClassifierSpec{}, X, y, folds);
  REQUIRE(r.cells.size() == 4);
  const double k100 = *r.cells[3].mean_kappa;
  CHECK(r.best.C < 100.0);
  CHECK(r.best_kappa > k100);
  // The winner is the first cell reaching the maximum of the cell table.
  double best = -2.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    if (r.cells[i].mean_kappa && *r.cells[i].mean_kappa > best) {
      best = *r.cells[i].mean_kappa;
      at = i;
    }
  }
  CHECK(r.best.C == r.cells[at].spec.C);
}

TEST_CASE("grid search fails only when every cell fails") {
  std::vector<Level> y(12, Level::low);
  for (std::size_t i = 0; i < 3; ++i) y[i] = Level::high;
  Matrix X(12, 2, 1.0);
  for (std::size_t i = 0; i < 12; ++i) X(i, 0) = static_cast<double>(i);
  // Every fit split of these folds sees a single class.
  std::vector<Fold> folds{{{3, 4, 5, 6, 7, 8, 9, 10, 11}, {0, 1, 2}}};
  CHECK(code_of([&] { grid_search(ClassifierKind::dt, GridSpace{}, ClassifierSpec{}, X, y, folds); }) ==
        ErrorCode::DegenerateLabels);
}

TEST_CASE("window sweep on a small cohort flags one row per schema and kind") {
  GeneratorParams p;
  p.n_participants = 6;
  p.session_minutes = 40;
  PipelineConfig cfg;
  cfg.windows = {60, 120};
  cfg.seed = 3;
  cfg.grid.svm_linear_C = {1};
  cfg.grid.svm_rbf_C = {1};
  cfg.grid.logreg_C = {1};
  cfg.grid.rf_n_trees = {20};
  const auto data = build_datasets(generate_cohort(p, 2), cfg, 2);
  REQUIRE(data.windows.size() == 2);
  CHECK(data.windows[0].size() >= 30);
  const auto a = window_sweep(data.windows, cfg.sweep(1));
  const auto b = window_sweep(data.windows, cfg.sweep(3));
  CHECK(a.rows.size() == 24);
  const auto flagged = a.flagged();
  CHECK(flagged.size() == 12);
  std::set<std::pair<int, int>> seen;
  for (const auto* r : flagged) {
    seen.insert({static_cast<int>(r->schema), static_cast<int>(r->kind)});
    CHECK((r->window_s == 60.0 || r->window_s == 120.0));
    // the flagged window has the best test kappa for its schema and kind
    for (const auto& other : a.rows) {
      if (other.schema == r->schema && other.kind == r->kind) CHECK(other.kappa <= r->kappa);
    }
  }
  CHECK(seen.size() == 12);
  REQUIRE(b.rows.size() == a.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].kappa == b.rows[i].kappa);
    CHECK(a.rows[i].predictions == b.rows[i].predictions);
    CHECK(a.rows[i].test_ids == b.rows[i].test_ids);
    CHECK(to_json(a.rows[i].model).dump() == to_json(b.rows[i].model).dump());
  }
  // A segment is on the same side of the split at every window.
  std::map<std::string, std::set<double>> test_windows;
  for (const auto& r : a.rows) {
    if (r.schema != Schema::multimodal || r.kind != ClassifierKind::nb) continue;
    for (const auto& id : r.test_ids) test_windows[id].insert(r.window_s);
  }
  for (const auto& w : data.windows) {
    for (const auto& id : w.ids) {
      const auto it = test_windows.find(id);
      if (it != test_windows.end()) CHECK(it->second.count(w.window_s) == 1);
    }
  }
  // Validation-kappa mode flags by cross-validation score instead.
  auto vcfg = cfg.sweep(1);
  vcfg.selection = WindowSelection::validation_kappa;
  const auto v = window_sweep(data.windows, vcfg);
  for (const auto* r : v.flagged()) {
    for (const auto& other : v.rows) {
      if (other.schema == r->schema && other.kind == r->kind) CHECK(other.cv_kappa <= r->cv_kappa);
    }
  }
}

TEST_CASE("a planted 90 s effect horizon is recovered by the window sweep") {
  GeneratorParams p;
  p.effect_horizon_s = 90.0;
  PipelineConfig cfg;
  cfg.seed = 1;
  cfg.schemas = {Schema::multimodal};
  cfg.kinds = {ClassifierKind::rf};
  const auto data = build_datasets(generate_cohort(p, 1), cfg, 1);
  const auto r = window_sweep(data.windows, cfg.sweep(1));
  const auto* best = r.flagged(Schema::multimodal, ClassifierKind::rf);
  REQUIRE(best != nullptr);
  MESSAGE("flagged window " << best->window_s << " s, kappa " << best->kappa);
  CHECK((best->window_s >= 60.0 && best->window_s <= 120.0));
}
