#include "cogload/selection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cogload/error.hpp"
#include "cogload/parallel.hpp"
#include "cogload/random.hpp"
#include "cogload/stats.hpp"

namespace cogload {

void SplitConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "split.train_fraction must lie in (0, 1)");
  }
}

namespace {

std::vector<Level> gather(std::span<const Level> y, std::span<const std::size_t> idx) {
  std::vector<Level> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(y[i]);
  return out;
}

Split stratified_split(std::span<const Level> y, const SplitConfig& cfg, Rng& rng) {
  Split s;
  for (auto level : kLevels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == level) members.push_back(i);
    }
    if (members.empty()) continue;
    if (members.size() < 2) {
      throw Error(ErrorCode::UnsatisfiableStratification,
                  "class " + std::string(to_string(level)) + " has a single row");
    }
    shuffle(members, rng);
    auto n_train = static_cast<std::size_t>(std::lround(cfg.train_fraction * static_cast<double>(members.size())));
    n_train = std::clamp<std::size_t>(n_train, 1, members.size() - 1);
    s.train.insert(s.train.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.insert(s.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train), members.end());
  }
  return s;
}

Split plain_split(std::size_t n, const SplitConfig& cfg, Rng& rng) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  shuffle(all, rng);
  auto n_train = static_cast<std::size_t>(std::lround(cfg.train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
  Split s;
  s.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
  return s;
}

Split grouped_split(std::span<const std::string> groups, const SplitConfig& cfg, Rng& rng) {
  std::map<std::string, std::vector<std::size_t>> by_group;
  for (std::size_t i = 0; i < groups.size(); ++i) by_group[groups[i]].push_back(i);
  if (by_group.size() < 2) throw Error(ErrorCode::TooFewSamples, "grouped split needs at least two participants");
  std::vector<std::string> names;
  for (const auto& [name, rows] : by_group) names.push_back(name);
  shuffle(names, rng);
  const double target_test = (1.0 - cfg.train_fraction) * static_cast<double>(groups.size());
  Split s;
  std::size_t in_test = 0;
  for (std::size_t g = 0; g < names.size(); ++g) {
    const auto& rows = by_group[names[g]];
    const bool to_test = g + 1 < names.size() && static_cast<double>(in_test) < target_test;
    auto& side = to_test ? s.test : s.train;
    if (to_test) in_test += rows.size();
    side.insert(side.end(), rows.begin(), rows.end());
  }
  if (s.train.empty()) throw Error(ErrorCode::TooFewSamples, "grouped split left no training rows");
  return s;
}

}  // namespace

Split split(std::span<const Level> y, std::span<const std::string> groups, const SplitConfig& cfg) {
  cfg.validate();
  if (y.size() < 10) throw Error(ErrorCode::TooFewSamples, std::to_string(y.size()) + " rows, need at least 10");
  Rng rng(derive_seed(cfg.seed, 0x5917));
  Split s;
  if (cfg.group_by_participant) {
    if (groups.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "group ids differ in length from labels");
    s = grouped_split(groups, cfg, rng);
  } else if (cfg.stratified) {
    s = stratified_split(y, cfg, rng);
  } else {
    s = plain_split(y.size(), cfg, rng);
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::vector<Fold> kfold(std::span<const std::size_t> train, std::span<const Level> y, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::TooFewSamples, "k must be at least 2");
  if (train.size() < static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::TooFewSamples, std::to_string(train.size()) + " rows for " + std::to_string(k) + " folds");
  }
  Rng rng(derive_seed(seed, 0xF01D));
  std::vector<std::size_t> dealt;
  for (auto level : kLevels) {
    std::vector<std::size_t> members;
    for (auto i : train) {
      if (y[i] == level) members.push_back(i);
    }
    shuffle(members, rng);
    dealt.insert(dealt.end(), members.begin(), members.end());
  }
  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < dealt.size(); ++i) folds[i % folds.size()].val.push_back(dealt[i]);
  for (auto& f : folds) {
    std::sort(f.val.begin(), f.val.end());
    std::set<std::size_t> val(f.val.begin(), f.val.end());
    for (auto i : train) {
      if (!val.contains(i)) f.fit.push_back(i);
    }
    std::sort(f.fit.begin(), f.fit.end());
  }
  return folds;
}

void GridSpace::validate() const {
  auto need = [](bool ok, const char* field) {
    if (!ok) throw Error(ErrorCode::InvalidConfig, std::string("grid.") + field + " must be a non-empty list");
  };
  need(!nb_alpha.empty(), "nb_alpha");
  need(!dt_criterion.empty(), "dt_criterion");
  need(!svm_linear_C.empty(), "svm_linear_C");
  need(!svm_rbf_C.empty(), "svm_rbf_C");
  need(!logreg_C.empty(), "logreg_C");
  need(!rf_n_trees.empty(), "rf_n_trees");
}

std::size_t GridSpace::total_cells() const {
  return nb_alpha.size() + dt_criterion.size() + svm_linear_C.size() + svm_rbf_C.size() + logreg_C.size() +
         rf_n_trees.size();
}

std::vector<ClassifierSpec> grid_cells(ClassifierKind kind, const GridSpace& grid, const ClassifierSpec& base) {
  std::vector<ClassifierSpec> cells;
  ClassifierSpec s = base;
  s.kind = kind;
  switch (kind) {
    case ClassifierKind::nb:
      for (double a : grid.nb_alpha) cells.push_back((s.alpha = a, s));
      break;
    case ClassifierKind::dt:
      for (auto c : grid.dt_criterion) cells.push_back((s.criterion = c, s));
      break;
    case ClassifierKind::svm_linear:
      for (double c : grid.svm_linear_C) cells.push_back((s.C = c, s));
      break;
    case ClassifierKind::svm_rbf:
      for (double c : grid.svm_rbf_C) cells.push_back((s.C = c, s));
      break;
    case ClassifierKind::logreg:
      for (double c : grid.logreg_C) cells.push_back((s.C = c, s));
      break;
    case ClassifierKind::rf:
      for (int t : grid.rf_n_trees) cells.push_back((s.n_trees = t, s));
      break;
  }
  return cells;
}

GridResult grid_search(ClassifierKind kind, const GridSpace& grid, const ClassifierSpec& base, const Matrix& X,
                       std::span<const Level> y, std::span<const Fold> folds, const FeatureSchema& schema) {
  GridResult result;
  const auto specs = grid_cells(kind, grid, base);
  if (specs.empty()) throw Error(ErrorCode::InvalidConfig, "empty grid for " + std::string(to_string(kind)));
  std::vector<Matrix> fit_X, val_X;
  std::vector<std::vector<Level>> fit_y, val_y;
  for (const auto& f : folds) {
    fit_X.push_back(X.select_rows(f.fit));
    val_X.push_back(X.select_rows(f.val));
    fit_y.push_back(gather(y, f.fit));
    val_y.push_back(gather(y, f.val));
  }
  std::optional<std::size_t> best;
  for (const auto& spec : specs) {
    CellResult cell;
    cell.spec = spec;
    double sum = 0.0;
    std::size_t ok = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      try {
        const auto model = fit(spec, fit_X[f], fit_y[f], schema);
        const double k = cohen_kappa(val_y[f], predict(model, val_X[f]));
        cell.fold_kappa.push_back(k);
        sum += k;
        ++ok;
      } catch (const Error& e) {
        cell.fold_kappa.push_back(std::nullopt);
        if (cell.error.empty()) cell.error = e.what();
      }
    }
    if (ok > 0) cell.mean_kappa = sum / static_cast<double>(ok);
    if (cell.mean_kappa && (!best || *cell.mean_kappa > *result.cells[*best].mean_kappa)) best = result.cells.size();
    result.cells.push_back(std::move(cell));
  }
  if (!best) {
    throw Error(ErrorCode::DegenerateLabels, "every grid cell failed for " + std::string(to_string(kind)) + ": " +
                                                 result.cells.front().error);
  }
  result.best = result.cells[*best].spec;
  result.best_kappa = *result.cells[*best].mean_kappa;
  return result;
}

std::vector<const SweepRow*> SweepResult::flagged() const {
  std::vector<const SweepRow*> out;
  for (const auto& r : rows) {
    if (r.flagged) out.push_back(&r);
  }
  return out;
}

const SweepRow* SweepResult::flagged(Schema s, ClassifierKind k) const {
  for (const auto& r : rows) {
    if (r.flagged && r.schema == s && r.kind == k) return &r;
  }
  return nullptr;
}

TrainedSelection train_model(ClassifierKind kind, const SweepConfig& cfg, const Matrix& X, std::span<const Level> y,
                             std::span<const std::size_t> train, const FeatureSchema& schema, double window_s,
                             std::size_t window_index) {
  ClassifierSpec base;
  base.nb_variant = cfg.nb_variant;
  base.seed = derive_seed(cfg.seed, 2);
  const auto folds = kfold(train, y, cfg.cv_folds, derive_seed(cfg.seed, 1, window_index));
  TrainedSelection out;
  out.grid = grid_search(kind, cfg.grid, base, X, y, folds, schema);
  out.model = fit(out.grid.best, X.select_rows(train), gather(y, train), schema, window_s);
  return out;
}

SweepResult window_sweep(const std::vector<WindowData>& windows, const SweepConfig& cfg) {
  if (windows.empty()) throw Error(ErrorCode::InvalidConfig, "windows must be a non-empty list");
  cfg.split.validate();
  cfg.grid.validate();

  // Union of labeled segments over all windows, in id order.
  std::map<std::string, std::pair<std::string, Level>> segments;
  for (const auto& w : windows) {
    for (std::size_t i = 0; i < w.size(); ++i) segments.emplace(w.ids[i], std::make_pair(w.participants[i], w.labels[i]));
  }
  std::vector<std::string> all_ids, groups;
  std::vector<Level> all_labels;
  for (const auto& [id, info] : segments) {
    all_ids.push_back(id);
    groups.push_back(info.first);
    all_labels.push_back(info.second);
  }
  const Split global = split(all_labels, groups, cfg.split);
  std::set<std::string> train_ids;
  for (auto i : global.train) train_ids.insert(all_ids[i]);

  struct Item {
    Schema schema;
    ClassifierKind kind;
    std::size_t window;
  };
  std::vector<Item> items;
  for (auto s : cfg.schemas) {
    for (auto k : cfg.kinds) {
      for (std::size_t w = 0; w < windows.size(); ++w) items.push_back({s, k, w});
    }
  }

  std::vector<std::optional<SweepRow>> rows(items.size());
  std::vector<std::string> reasons(items.size());
  parallel_for(items.size(), cfg.jobs, [&](std::size_t it) {
    const auto& item = items[it];
    const auto& data = windows[item.window];
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < data.size(); ++i) (train_ids.contains(data.ids[i]) ? train : test).push_back(i);
    try {
      if (train.empty() || test.empty()) throw Error(ErrorCode::Empty, "no segments on one side of the split");
      const Matrix& X = data.matrix(item.schema);
      auto trained = train_model(item.kind, cfg, X, data.labels, train, data.features(item.schema), data.window_s,
                                 item.window);
      SweepRow row;
      row.schema = item.schema;
      row.kind = item.kind;
      row.window_s = data.window_s;
      row.spec = trained.grid.best;
      row.cv_kappa = trained.grid.best_kappa;
      row.cells = std::move(trained.grid.cells);
      row.model = std::move(trained.model);
      row.n_train = train.size();
      for (auto i : test) row.test_ids.push_back(data.ids[i]);
      row.truth = gather(data.labels, test);
      row.predictions = predict(row.model, X.select_rows(test));
      row.kappa = cohen_kappa(row.truth, row.predictions);
      row.accuracy = accuracy(row.truth, row.predictions);
      rows[it] = std::move(row);
    } catch (const Error& e) {
      reasons[it] = e.what();
    }
  });

  SweepResult result;
  for (std::size_t it = 0; it < items.size(); ++it) {
    if (rows[it]) {
      result.rows.push_back(std::move(*rows[it]));
    } else {
      result.skipped.push_back({items[it].schema, items[it].kind, windows[items[it].window].window_s, reasons[it]});
    }
  }
  for (auto s : cfg.schemas) {
    for (auto k : cfg.kinds) {
      SweepRow* best = nullptr;
      for (auto& r : result.rows) {
        if (r.schema != s || r.kind != k) continue;
        const double score = cfg.selection == WindowSelection::test_kappa ? r.kappa : r.cv_kappa;
        const double best_score =
            best == nullptr ? 0.0 : (cfg.selection == WindowSelection::test_kappa ? best->kappa : best->cv_kappa);
        if (best == nullptr || score > best_score) best = &r;
      }
      if (best != nullptr) best->flagged = true;
    }
  }
  return result;
}

}  // namespace cogload
