#include "cogload/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "cogload/csv.hpp"
#include "cogload/error.hpp"
#include "cogload/parallel.hpp"

namespace cogload {

namespace fs = std::filesystem;

namespace {

constexpr const char* kIncomplete = "INCOMPLETE";

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::MissingFile, "cannot write " + path.string());
  return out;
}

void log_line(const RunOptions& opt, const std::string& text) {
  if (opt.log != nullptr) *opt.log << text << std::endl;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

template <class Source>
Datasets build_from(std::size_t n, Source&& session_at, const PipelineConfig& cfg, unsigned jobs) {
  Datasets out;
  DatasetBuilder all(cfg.windows, cfg.labels, cfg.features);
  const std::size_t chunk = std::max(1u, jobs);
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t count = std::min(chunk, n - begin);
    std::vector<DatasetBuilder> parts(count, DatasetBuilder(cfg.windows, cfg.labels, cfg.features));
    parallel_for(count, jobs, [&](std::size_t i) {
      const Session raw = session_at(begin + i);
      Session cleaned;
      try {
        cleaned = clean_session(raw, cfg.cleaning);
      } catch (const Error& e) {
        throw Error(e.code(), raw.participant_id + ": " + e.what());
      }
      parts[i].add(cleaned);
    });
    for (auto& p : parts) all.append(std::move(p));
  }
  out.sessions = n;
  out.skipped = all.skipped();
  out.windows = all.take();
  return out;
}

std::string level_name(Level l) { return std::string(to_string(l)); }

void check_rows(const fs::path& path, std::size_t expected) {
  const auto table = csv::read(path);
  if (table.rows.size() != expected) {
    throw Error(ErrorCode::MalformedRow, path.string() + ": wrote " + std::to_string(expected) + " rows, read back " +
                                             std::to_string(table.rows.size()));
  }
}

}  // namespace

std::vector<fs::path> find_manifests(const fs::path& data_dir) {
  if (!fs::is_directory(data_dir)) throw Error(ErrorCode::MissingFile, data_dir.string() + " is not a directory");
  std::vector<fs::path> out;
  if (fs::exists(data_dir / "manifest.json")) out.push_back(data_dir / "manifest.json");
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) out.push_back(entry.path() / "manifest.json");
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw Error(ErrorCode::MissingData, "no manifest.json found under " + data_dir.string());
  return out;
}

Datasets build_datasets(const std::vector<fs::path>& manifests, const PipelineConfig& cfg, unsigned jobs) {
  return build_from(manifests.size(), [&](std::size_t i) { return load_session(manifests[i]); }, cfg, jobs);
}

Datasets build_datasets(const std::vector<SyntheticSession>& cohort, const PipelineConfig& cfg, unsigned jobs) {
  return build_from(cohort.size(), [&](std::size_t i) { return cohort[i].session; }, cfg, jobs);
}

std::string model_name(Schema s, ClassifierKind k) { return std::string(to_string(s)) + "_" + std::string(to_string(k)); }

PredictionSet predictions_of(const SweepRow& row) {
  return {model_name(row.schema, row.kind), row.test_ids, row.truth, row.predictions};
}

std::pair<PredictionSet, PredictionSet> align(const PredictionSet& a, const PredictionSet& b) {
  std::map<std::string, std::size_t> in_b;
  for (std::size_t i = 0; i < b.ids.size(); ++i) in_b.emplace(b.ids[i], i);
  PredictionSet ra{a.model, {}, {}, {}}, rb{b.model, {}, {}, {}};
  for (std::size_t i = 0; i < a.ids.size(); ++i) {
    auto it = in_b.find(a.ids[i]);
    if (it == in_b.end()) continue;
    if (b.truth[it->second] != a.truth[i]) {
      throw Error(ErrorCode::SchemaMismatch,
                  a.model + " and " + b.model + " disagree on the true label of " + a.ids[i]);
    }
    ra.ids.push_back(a.ids[i]);
    ra.truth.push_back(a.truth[i]);
    ra.predictions.push_back(a.predictions[i]);
    rb.ids.push_back(a.ids[i]);
    rb.truth.push_back(a.truth[i]);
    rb.predictions.push_back(b.predictions[it->second]);
  }
  return {ra, rb};
}

Comparison compare(const PredictionSet& a, const PredictionSet& b, McNemarOptions opt) {
  auto [ra, rb] = align(a, b);
  Comparison c;
  c.model_a = a.model;
  c.model_b = b.model;
  c.n = ra.ids.size();
  c.result = mcnemar(ra.truth, ra.predictions, rb.predictions, opt);
  return c;
}

CochranSummary cochran(const std::string& group, const std::vector<PredictionSet>& models) {
  if (models.size() < 2) throw Error(ErrorCode::InvalidArgument, "cochran q needs at least two models");
  std::set<std::string> shared(models[0].ids.begin(), models[0].ids.end());
  for (std::size_t m = 1; m < models.size(); ++m) {
    std::set<std::string> mine(models[m].ids.begin(), models[m].ids.end());
    std::set<std::string> keep;
    std::set_intersection(shared.begin(), shared.end(), mine.begin(), mine.end(), std::inserter(keep, keep.end()));
    shared = std::move(keep);
  }
  std::vector<Level> truth;
  std::vector<std::vector<Level>> preds(models.size());
  std::vector<std::map<std::string, std::size_t>> index(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (std::size_t i = 0; i < models[m].ids.size(); ++i) index[m].emplace(models[m].ids[i], i);
  }
  for (const auto& id : models[0].ids) {
    if (!shared.contains(id)) continue;
    const Level t = models[0].truth[index[0].at(id)];
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto i = index[m].at(id);
      if (models[m].truth[i] != t) {
        throw Error(ErrorCode::SchemaMismatch, models[m].model + " disagrees on the true label of " + id);
      }
      preds[m].push_back(models[m].predictions[i]);
    }
    truth.push_back(t);
  }
  CochranSummary s;
  s.group = group;
  s.k = models.size();
  s.n = truth.size();
  s.result = cochran_q(truth, preds);
  return s;
}

std::string provenance(const std::string& hash, std::uint64_t seed) {
  return "cogload config_hash=" + hash + " seed=" + std::to_string(seed);
}

void write_predictions(const PredictionSet& p, const fs::path& path, const std::string& comment) {
  auto out = open_out(path);
  out << "# " << comment << '\n';
  out << "segment_id,truth,prediction\n";
  for (std::size_t i = 0; i < p.ids.size(); ++i) {
    out << p.ids[i] << ',' << to_string(p.truth[i]) << ',' << to_string(p.predictions[i]) << '\n';
  }
}

PredictionSet load_predictions(const fs::path& path) {
  const auto table = csv::read(path);
  const auto id = table.column("segment_id"), truth = table.column("truth"), pred = table.column("prediction");
  if (!id || !truth || !pred) {
    throw Error(ErrorCode::SchemaMismatch, path.string() + ": expected columns segment_id,truth,prediction");
  }
  PredictionSet p;
  p.model = path.stem().string();
  if (p.model.starts_with("predictions_")) p.model = p.model.substr(12);
  std::set<std::string> seen;
  for (const auto& row : table.rows) {
    if (row.fields.size() != table.header.size()) {
      throw Error(ErrorCode::MalformedRow, path.string() + ":" + std::to_string(row.line) + ": wrong field count");
    }
    const auto t = parse_level(row.fields[*truth]);
    const auto y = parse_level(row.fields[*pred]);
    if (!t || !y) throw Error(ErrorCode::MalformedRow, path.string() + ":" + std::to_string(row.line) + ": bad level");
    if (!seen.insert(row.fields[*id]).second) {
      throw Error(ErrorCode::MalformedRow, path.string() + ": duplicate segment " + row.fields[*id]);
    }
    p.ids.push_back(row.fields[*id]);
    p.truth.push_back(*t);
    p.predictions.push_back(*y);
  }
  return p;
}

RunResult analyze(Datasets data, const PipelineConfig& cfg, unsigned jobs) {
  cfg.validate();
  RunResult r;
  r.data = std::move(data);
  r.sweep = window_sweep(r.data.windows, cfg.sweep(jobs));
  const McNemarOptions mc{cfg.mcnemar_continuity_correction};
  for (auto s : cfg.schemas) {
    std::vector<PredictionSet> group;
    for (auto k : cfg.kinds) {
      if (const auto* row = r.sweep.flagged(s, k)) group.push_back(predictions_of(*row));
    }
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) r.comparisons.push_back(compare(group[a], group[b], mc));
    }
    if (group.size() >= 2) r.cochran.push_back(cochran(std::string(to_string(s)), group));
  }
  if (std::count(cfg.schemas.begin(), cfg.schemas.end(), Schema::multimodal) &&
      std::count(cfg.schemas.begin(), cfg.schemas.end(), Schema::unimodal)) {
    for (auto k : cfg.kinds) {
      const auto* m = r.sweep.flagged(Schema::multimodal, k);
      const auto* u = r.sweep.flagged(Schema::unimodal, k);
      if (m && u) r.comparisons.push_back(compare(predictions_of(*m), predictions_of(*u), mc));
    }
  }
  for (auto s : cfg.schemas) {
    if (const auto* row = r.sweep.flagged(s, ClassifierKind::rf)) {
      r.importances.emplace_back(model_name(s, ClassifierKind::rf), gini_importance(row->model));
    }
  }
  return r;
}

namespace {

void write_comparisons(const std::vector<Comparison>& rows, const fs::path& path, const std::string& comment) {
  auto out = open_out(path);
  out << "# " << comment << '\n';
  out << "model_a,model_b,chi2,p,eta2\n";
  for (const auto& c : rows) {
    out << c.model_a << ',' << c.model_b << ',' << csv::format_double(c.result.statistic) << ','
        << csv::format_double(c.result.p_value) << ',' << csv::format_double(c.result.effect_size) << '\n';
  }
}

void write_cochran(const std::vector<CochranSummary>& rows, const fs::path& path, const std::string& comment) {
  auto out = open_out(path);
  out << "# " << comment << '\n';
  out << "group,k,n,q,df,p,eta2_q\n";
  for (const auto& c : rows) {
    out << c.group << ',' << c.k << ',' << c.n << ',' << csv::format_double(c.result.statistic) << ',' << c.result.df
        << ',' << csv::format_double(c.result.p_value) << ',' << csv::format_double(c.result.effect_size) << '\n';
  }
}

std::string fold_list(const CellResult& cell) {
  std::string s;
  for (std::size_t f = 0; f < cell.fold_kappa.size(); ++f) {
    if (f > 0) s += ';';
    s += cell.fold_kappa[f] ? csv::format_double(*cell.fold_kappa[f]) : "NA";
  }
  return s;
}

std::string sanitize(std::string text) {
  std::replace(text.begin(), text.end(), ',', ';');
  std::replace(text.begin(), text.end(), '\n', ' ');
  return text;
}

void write_skipped(const Datasets& data, const SweepResult& sweep, const fs::path& path, const std::string& comment) {
  auto out = open_out(path);
  out << "# " << comment << '\n';
  out << "stage,participant_id,report_index,schema,kind,window_s,reason\n";
  for (const auto& s : data.skipped) {
    out << "segment," << s.participant_id << ',' << s.report_index << ",,," << csv::format_double(s.window_s) << ','
        << sanitize(s.reason) << '\n';
  }
  for (const auto& s : sweep.skipped) {
    out << "model,,," << to_string(s.schema) << ',' << to_string(s.kind) << ',' << csv::format_double(s.window_s)
        << ',' << sanitize(s.reason) << '\n';
  }
}

std::string mcnemar_matrix(const PipelineConfig& cfg, const RunResult& r, Schema s) {
  std::vector<std::string> names;
  for (auto k : cfg.kinds) {
    if (r.sweep.flagged(s, k)) names.push_back(model_name(s, k));
  }
  std::map<std::pair<std::string, std::string>, const Comparison*> by_pair;
  for (const auto& c : r.comparisons) by_pair[{c.model_a, c.model_b}] = &c;
  std::ostringstream md;
  md << "| |";
  for (std::size_t j = 0; j + 1 < names.size(); ++j) md << ' ' << names[j] << " |";
  md << "\n|---|";
  for (std::size_t j = 0; j + 1 < names.size(); ++j) md << "---|";
  md << '\n';
  for (std::size_t i = 1; i < names.size(); ++i) {
    md << "| " << names[i] << " |";
    for (std::size_t j = 0; j + 1 < names.size(); ++j) {
      if (j >= i) {
        md << " |";
        continue;
      }
      const auto* c = by_pair.at({names[j], names[i]});
      md << ' ' << fixed3(c->result.statistic) << " (p = " << fixed3(c->result.p_value) << ") |";
    }
    md << '\n';
  }
  return md.str();
}

void write_report(const PipelineConfig& cfg, const RunResult& r, const fs::path& path, const std::string& comment) {
  auto out = open_out(path);
  out << "<!-- " << comment << " -->\n";
  out << "# Cognitive load model report\n\n";
  out << "Sessions: " << r.data.sessions << ". Segments per window:";
  for (std::size_t w = 0; w < r.data.windows.size(); ++w) {
    out << (w ? ", " : " ") << csv::format_double(r.data.windows[w].window_s) << " s = " << r.data.windows[w].size();
  }
  out << ". Skipped segment windows: " << r.data.skipped.size() << ". Skipped model runs: " << r.sweep.skipped.size()
      << " (see skipped.csv).\n\n";

  out << "## Model performance and window size\n\n";
  out << "| Schema | Model | Kappa | Accuracy | Window (s) | Hyperparameters |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto* row : r.sweep.flagged()) {
    out << "| " << to_string(row->schema) << " | " << to_string(row->kind) << " | " << fixed3(row->kappa) << " | "
        << fixed3(row->accuracy) << " | " << csv::format_double(row->window_s) << " | " << row->spec.describe()
        << " |\n";
  }
  out << "\nEach row is the window with the highest "
      << (cfg.window_selection == WindowSelection::test_kappa ? "test" : "cross-validated") << " kappa for that model.\n\n";

  out << "## Cochran's Q\n\n";
  out << "| Models | k | n | Q | df | p | eta2_Q |\n|---|---|---|---|---|---|---|\n";
  for (const auto& c : r.cochran) {
    out << "| " << c.group << " | " << c.k << " | " << c.n << " | " << fixed3(c.result.statistic) << " | "
        << c.result.df << " | " << fixed3(c.result.p_value) << " | " << fixed3(c.result.effect_size) << " |\n";
  }
  out << '\n';

  for (auto s : cfg.schemas) {
    out << "## Pairwise McNemar tests, " << to_string(s) << "\n\n";
    out << "Cells give chi2 (p).\n\n" << mcnemar_matrix(cfg, r, s) << '\n';
  }

  out << "## Multimodal versus unimodal\n\n";
  out << "| Model | n | chi2 | p | eta2 |\n|---|---|---|---|---|\n";
  for (const auto& c : r.comparisons) {
    if (c.model_a.starts_with("multimodal_") && c.model_b.starts_with("unimodal_")) {
      out << "| " << c.model_a.substr(11) << " | " << c.n << " | " << fixed3(c.result.statistic) << " | "
          << fixed3(c.result.p_value) << " | " << fixed3(c.result.effect_size) << " |\n";
    }
  }
  out << '\n';

  out << "## Feature group importance\n\n";
  out << "| Model | Pupil % | EDA % | HR % |\n|---|---|---|---|\n";
  for (const auto& [name, imp] : r.importances) {
    out << "| " << name << " | " << fixed3(imp.group_percent[0]) << " | " << fixed3(imp.group_percent[1]) << " | "
        << fixed3(imp.group_percent[2]) << " |\n";
  }
  for (const auto& [name, imp] : r.importances) {
    std::vector<std::size_t> order(imp.features.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return imp.importance[a] > imp.importance[b]; });
    out << "\nTop features, " << name << ":";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, order.size()); ++i) {
      out << (i ? ", " : " ") << imp.features[order[i]] << " (" << fixed3(imp.importance[order[i]]) << ")";
    }
    out << '\n';
  }

  out << "\n## Conventions\n\n";
  out << "- Load score: mean of the intrinsic, extraneous and germane item means and the overall item.\n";
  out << "- Levels: low below " << csv::format_double(cfg.labels.edges.low_moderate) << ", moderate from "
      << csv::format_double(cfg.labels.edges.low_moderate) << " up to "
      << csv::format_double(cfg.labels.edges.moderate_high) << ", high from "
      << csv::format_double(cfg.labels.edges.moderate_high) << ".\n";
  out << "- Kappa: Cohen's kappa with chance agreement from the marginal products.\n";
  if (cfg.mcnemar_continuity_correction) {
    out << "- McNemar: chi2 = max(|b - c| - 1, 0)^2 / (b + c), df = 1, continuity corrected.\n";
  } else {
    out << "- McNemar: chi2 = (b - c)^2 / (b + c), df = 1, no continuity correction.\n";
  }
  out << "- McNemar effect size: eta2 = chi2 / (n - 1), n = shared test segments.\n";
  out << "- Cochran's Q: df = k - 1, eta2_Q = Q / (n (k - 1)).\n";
  out << "- Windows searched (s):";
  for (std::size_t w = 0; w < cfg.windows.size(); ++w) out << (w ? ", " : " ") << csv::format_double(cfg.windows[w]);
  out << ".\n";
  out << "- Split: " << csv::format_double(cfg.split.train_fraction * 100.0) << "% training, "
      << (cfg.split.group_by_participant ? "grouped by participant"
                                         : (cfg.split.stratified ? "stratified by level" : "unstratified"))
      << "; " << cfg.cv_folds << "-fold cross-validated grid search on kappa.\n";
}

}  // namespace

RunResult run_pipeline(const PipelineConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  fs::create_directories(opt.out_dir);
  const auto marker = opt.out_dir / kIncomplete;
  {
    auto m = open_out(marker);
    m << "run started; outputs in this directory are partial until this file is removed\n";
  }
  auto fail_marker = [&](const std::string& why) {
    std::ofstream m(marker, std::ios::binary);
    m << "run failed: " << why << '\n';
  };
  try {
    const std::string comment = provenance(config_hash(cfg), cfg.seed);
    const auto manifests = find_manifests(opt.data_dir);
    log_line(opt, "loading " + std::to_string(manifests.size()) + " sessions");
    auto data = build_datasets(manifests, cfg, opt.jobs);
    log_line(opt, "sweeping " + std::to_string(cfg.schemas.size() * cfg.kinds.size() * cfg.windows.size()) +
                      " model/window combinations");
    RunResult r = analyze(std::move(data), cfg, opt.jobs);

    const auto flagged = r.sweep.flagged();
    {
      auto out = open_out(opt.out_dir / "sweep.csv");
      out << "# " << comment << '\n';
      out << "schema,kind,kappa,accuracy,window_s,hyperparameters\n";
      for (const auto* row : flagged) {
        out << to_string(row->schema) << ',' << to_string(row->kind) << ',' << csv::format_double(row->kappa) << ','
            << csv::format_double(row->accuracy) << ',' << csv::format_double(row->window_s) << ','
            << row->spec.describe() << '\n';
      }
    }
    std::size_t cell_rows = 0;
    {
      auto out = open_out(opt.out_dir / "sweep_cells.csv");
      out << "# " << comment << '\n';
      out << "schema,kind,window_s,cv_kappa,kappa,accuracy,hyperparameters,n_train,n_test,flagged\n";
      for (const auto& row : r.sweep.rows) {
        out << to_string(row.schema) << ',' << to_string(row.kind) << ',' << csv::format_double(row.window_s) << ','
            << csv::format_double(row.cv_kappa) << ',' << csv::format_double(row.kappa) << ','
            << csv::format_double(row.accuracy) << ',' << row.spec.describe() << ',' << row.n_train << ','
            << row.test_ids.size() << ',' << (row.flagged ? 1 : 0) << '\n';
      }
      auto grid = open_out(opt.out_dir / "grid_cells.csv");
      grid << "# " << comment << '\n';
      grid << "schema,kind,window_s,hyperparameters,mean_kappa,fold_kappa,error\n";
      for (const auto& row : r.sweep.rows) {
        for (const auto& cell : row.cells) {
          grid << to_string(row.schema) << ',' << to_string(row.kind) << ',' << csv::format_double(row.window_s) << ','
               << cell.spec.describe() << ',' << (cell.mean_kappa ? csv::format_double(*cell.mean_kappa) : "NA") << ','
               << fold_list(cell) << ',' << sanitize(cell.error) << '\n';
          ++cell_rows;
        }
      }
    }
    fs::create_directories(opt.out_dir / "models");
    for (const auto* row : flagged) {
      const auto name = model_name(row->schema, row->kind);
      write_predictions(predictions_of(*row), opt.out_dir / ("predictions_" + name + ".csv"), comment);
      save_model(row->model, opt.out_dir / "models" / (name + ".json"));
    }
    write_comparisons(r.comparisons, opt.out_dir / "comparisons.csv", comment);
    write_cochran(r.cochran, opt.out_dir / "cochran.csv", comment);
    std::size_t importance_rows = 0;
    {
      auto out = open_out(opt.out_dir / "importances.csv");
      out << "# " << comment << '\n';
      out << "model,feature,group,importance\n";
      for (const auto& [name, imp] : r.importances) {
        for (std::size_t f = 0; f < imp.features.size(); ++f) {
          out << name << ',' << imp.features[f] << ',' << to_string(imp.groups[f]) << ','
              << csv::format_double(imp.importance[f]) << '\n';
          ++importance_rows;
        }
      }
    }
    write_skipped(r.data, r.sweep, opt.out_dir / "skipped.csv", comment);
    write_report(cfg, r, opt.out_dir / "report.md", comment);

    check_rows(opt.out_dir / "sweep.csv", flagged.size());
    check_rows(opt.out_dir / "sweep_cells.csv", r.sweep.rows.size());
    check_rows(opt.out_dir / "grid_cells.csv", cell_rows);
    check_rows(opt.out_dir / "comparisons.csv", r.comparisons.size());
    check_rows(opt.out_dir / "cochran.csv", r.cochran.size());
    check_rows(opt.out_dir / "importances.csv", importance_rows);
    check_rows(opt.out_dir / "skipped.csv", r.data.skipped.size() + r.sweep.skipped.size());
    for (const auto* row : flagged) {
      const auto name = model_name(row->schema, row->kind);
      check_rows(opt.out_dir / ("predictions_" + name + ".csv"), row->test_ids.size());
      load_model(opt.out_dir / "models" / (name + ".json"));
    }
    fs::remove(marker);
    log_line(opt, "wrote " + std::to_string(flagged.size()) + " flagged models to " + opt.out_dir.string());
    return r;
  } catch (const std::exception& e) {
    fail_marker(e.what());
    throw;
  }
}

std::size_t extract_features(const PipelineConfig& cfg, Schema schema, const RunOptions& opt) {
  cfg.validate();
  fs::create_directories(opt.out_dir);
  const std::string comment = provenance(config_hash(cfg), cfg.seed);
  const auto manifests = find_manifests(opt.data_dir);
  const auto data = build_datasets(manifests, cfg, opt.jobs);
  const auto s = static_cast<std::size_t>(schema);
  std::size_t rows = 0;
  {
    auto out = open_out(opt.out_dir / "features.csv");
    out << "# " << comment << '\n';
    std::vector<std::string> header{"segment_id", "participant_id", "window_s", "label"};
    const auto names = feature_names(schema, cfg.features.include_ipa(schema));
    header.insert(header.end(), names.begin(), names.end());
    out << csv::join(header) << '\n';
    for (const auto& w : data.windows) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        out << w.ids[i] << ',' << w.participants[i] << ',' << csv::format_double(w.window_s) << ','
            << level_name(w.labels[i]);
        for (double v : w.X[s].row(i)) out << ',' << csv::format_double(v);
        out << '\n';
        ++rows;
      }
    }
  }
  write_skipped(data, SweepResult{}, opt.out_dir / "skipped.csv", comment);
  check_rows(opt.out_dir / "features.csv", rows);
  return rows;
}

void run_stats(const std::vector<fs::path>& files, const fs::path& out_dir, McNemarOptions opt) {
  if (files.empty()) throw Error(ErrorCode::InvalidArgument, "no prediction files given");
  std::vector<PredictionSet> models;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    models.push_back(load_predictions(f));
    std::ifstream in(f, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    inputs.push_back({{"model", models.back().model}, {"content", fnv1a_hex(buf.str())}});
  }
  std::set<std::string> names;
  for (const auto& m : models) {
    if (!names.insert(m.model).second) throw Error(ErrorCode::InvalidArgument, "duplicate model name " + m.model);
  }
  nlohmann::ordered_json key{{"inputs", inputs}, {"continuity_correction", opt.continuity_correction}};
  const std::string comment = provenance(fnv1a_hex(key.dump()), 0);
  fs::create_directories(out_dir);
  {
    auto out = open_out(out_dir / "metrics.csv");
    out << "# " << comment << '\n';
    out << "model,n,accuracy,kappa\n";
    for (const auto& m : models) {
      out << m.model << ',' << m.ids.size() << ',' << csv::format_double(accuracy(m.truth, m.predictions)) << ','
          << csv::format_double(cohen_kappa(m.truth, m.predictions)) << '\n';
    }
  }
  std::vector<Comparison> comparisons;
  for (std::size_t a = 0; a < models.size(); ++a) {
    for (std::size_t b = a + 1; b < models.size(); ++b) comparisons.push_back(compare(models[a], models[b], opt));
  }
  write_comparisons(comparisons, out_dir / "comparisons.csv", comment);
  std::vector<CochranSummary> q;
  if (models.size() >= 2) q.push_back(cochran("all", models));
  write_cochran(q, out_dir / "cochran.csv", comment);
  check_rows(out_dir / "metrics.csv", models.size());
  check_rows(out_dir / "comparisons.csv", comparisons.size());
  check_rows(out_dir / "cochran.csv", q.size());
}

void write_cohort(const GeneratorParams& p, const fs::path& out_dir, unsigned jobs) {
  p.validate();
  fs::create_directories(out_dir);
  const auto params = to_json(p);
  const std::string comment = provenance(fnv1a_hex(params.dump()), p.seed);
  {
    auto out = open_out(out_dir / "params.json");
    out << params.dump(2) << '\n';
  }
  parallel_for(static_cast<std::size_t>(p.n_participants), jobs, [&](std::size_t i) {
    const auto s = generate_session(p, static_cast<int>(i));
    const auto dir = out_dir / s.session.participant_id;
    fs::create_directories(dir);
    save_session(s.session, dir, comment);
    save_truth(s.truth, dir / "truth.csv", comment);
  });
}

}  // namespace cogload
