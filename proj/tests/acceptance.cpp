// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cogload/error.hpp"
#include "cogload/features.hpp"
#include "cogload/pipeline.hpp"
#include "cogload/preprocess.hpp"
#include "cogload/stats.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cogload;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d  %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion_filter() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto c = design_butterworth(3, 4.0, 200.0);
  const double h0 = std::abs(frequency_response(c, 0.0, 200.0));
  const double h4 = std::abs(frequency_response(c, 4.0, 200.0));
  const double h8 = std::abs(frequency_response(c, 8.0, 200.0));
  // one hour of 200 Hz pupil data through the zero-phase filter
  std::vector<double> x(200 * 3600);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 3.0 + 0.1 * std::sin(0.01 * static_cast<double>(i));
  const auto y = filtfilt(c, x);
  const double elapsed = seconds_since(t0);
  const double a8 = oracle::butterworth_analog_magnitude(3, 4.0, 8.0);
  const bool pass = std::abs(h0 - 1.0) <= 1e-6 && std::abs(h4 - 1.0 / std::sqrt(2.0)) <= 1e-3 &&
                    std::abs(h8 - 0.124) <= 5e-3 && std::abs(h8 - a8) <= 5e-3 &&
                    std::abs(h4 - oracle::butterworth_analog_magnitude(3, 4.0, 4.0)) <= 1e-3 && elapsed < 1.0 &&
                    y.size() == x.size();
  report(1, pass,
         fmt("Butterworth 3rd order 4 Hz @ 200 Hz: |H(0)|=%.9f |H(4)|=%.6f |H(8)|=%.6f (analog %.6f); design+1 h "
             "filtfilt %.3f s",
             h0, h4, h8, a8, elapsed));
}

void criterion_features() {
  Rng rng(2);
  const std::vector<double> windows{30, 60, 90, 120, 150, 180, 210};
  std::size_t compared = 0, mismatched = 0;
  double worst = 0.0;
  std::string worst_name;
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto seg = fixture::random_segment(windows[static_cast<std::size_t>(i) % windows.size()], rng);
    const auto fv = build_feature_vector(seg, Schema::multimodal, true);
    const auto ref = oracle::segment_features(seg, Schema::multimodal, true);
    if (fv.size() != 26 || ref.size() != 26) {
      ++mismatched;
      continue;
    }
    for (const auto& f : fv.features) {
      const double r = ref.at(f.name);
      const double err = std::abs(f.value - r) / std::max(1.0, std::abs(r));
      ++compared;
      if (err > worst) {
        worst = err;
        worst_name = f.name;
      }
      if (!(err <= 1e-9)) ++mismatched;
    }
  }
  report(2, mismatched == 0 && compared == 26u * n,
         fmt("%d random windows x 3 modalities, %zu feature values vs reference: %zu mismatches, worst relative "
             "error %.2e (%s)",
             n, compared, mismatched, worst, worst_name.c_str()));
}

std::pair<std::vector<Level>, std::vector<Level>> from_confusion(const std::vector<std::vector<int>>& m) {
  std::vector<Level> t, p;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      for (int k = 0; k < m[i][j]; ++k) {
        t.push_back(static_cast<Level>(i));
        p.push_back(static_cast<Level>(j));
      }
    }
  }
  return {t, p};
}

void criterion_stats() {
  const auto [t, p] = from_confusion({{40, 10}, {10, 40}});
  const double kappa = cohen_kappa(t, p);

  // b = 10 (a right, b wrong), c = 2, plus 20 rows both right
  std::vector<Level> truth(32, Level::low), a(32, Level::low), b(32, Level::low);
  for (int i = 0; i < 10; ++i) b[i] = Level::high;
  for (int i = 10; i < 12; ++i) a[i] = Level::high;
  const auto mc = mcnemar(truth, a, b);

  Rng rng(3);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 10 + rng.index(200);
    std::vector<Level> tt(n), pa(n), pb(n);
    for (std::size_t i = 0; i < n; ++i) {
      tt[i] = static_cast<Level>(rng.index(3));
      pa[i] = rng.uniform() < 0.6 ? tt[i] : static_cast<Level>(rng.index(3));
      pb[i] = rng.uniform() < 0.5 ? tt[i] : static_cast<Level>(rng.index(3));
    }
    const auto q = cochran_q(tt, {pa, pb});
    const auto m = mcnemar(tt, pa, pb, McNemarOptions{false});
    worst = std::max(worst, std::abs(q.statistic - m.statistic));
  }
  const double sf = chi_square_sf(15.357, 5);
  const bool pass = std::abs(kappa - 0.6) <= 1e-9 && std::abs(mc.statistic - 4.083) <= 1e-3 &&
                    std::abs(mc.p_value - 0.043) <= 0.002 && worst <= 1e-9 && std::abs(sf - 0.009) <= 0.001;
  report(3, pass,
         fmt("kappa(40,10;10,40)=%.12f; McNemar b=10 c=2 chi2=%.4f p=%.4f; Cochran k=2 vs McNemar max diff %.1e "
             "over 100 fixtures; chi2_sf(15.357, 5)=%.4f",
             kappa, mc.statistic, mc.p_value, worst, sf));
}

void criterion_leakage() {
  GeneratorParams p;
  p.n_participants = 10;
  PipelineConfig cfg;
  cfg.windows = {60};
  cfg.seed = 4;
  const auto data = build_datasets(generate_cohort(p, 1), cfg, 1);
  const auto& w = data.windows.at(0);
  const auto sweep = cfg.sweep(1);
  const auto s = split(w.labels, w.participants, sweep.split);

  std::size_t models = 0, differing = 0, changed_labels = 0;
  for (int rep = 0; rep < 3; ++rep) {
    auto permuted = w.labels;
    std::vector<Level> test_labels;
    for (auto i : s.test) test_labels.push_back(permuted[i]);
    Rng rng(derive_seed(11, static_cast<std::uint64_t>(rep)));
    shuffle(test_labels, rng);
    for (std::size_t k = 0; k < s.test.size(); ++k) {
      changed_labels += permuted[s.test[k]] != test_labels[k];
      permuted[s.test[k]] = test_labels[k];
    }
    for (Schema schema : {Schema::unimodal, Schema::multimodal}) {
      for (ClassifierKind kind : kAllKinds) {
        const auto& X = w.matrix(schema);
        const auto a = train_model(kind, sweep, X, w.labels, s.train, w.features(schema), w.window_s, 0);
        const auto b = train_model(kind, sweep, X, permuted, s.train, w.features(schema), w.window_s, 0);
        ++models;
        const bool same_model = to_json(a.model).dump() == to_json(b.model).dump();
        const bool same_std = a.model.standardizer == b.model.standardizer;
        bool same_cells = a.grid.cells.size() == b.grid.cells.size();
        for (std::size_t c = 0; same_cells && c < a.grid.cells.size(); ++c) {
          same_cells = a.grid.cells[c].fold_kappa == b.grid.cells[c].fold_kappa;
        }
        if (!(same_model && same_std && same_cells)) ++differing;
      }
    }
  }
  report(4, differing == 0 && changed_labels > 0,
         fmt("%zu fitted models (6 kinds x 2 schemas x 3 test-label permutations, %zu test labels changed): %zu "
             "differ from the unpermuted fit",
             models, changed_labels, differing));
}

struct CohortRun {
  RunResult result;
  double seconds = 0.0;
};

CohortRun run_cohort(const GeneratorParams& p, const PipelineConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  auto data = build_datasets(generate_cohort(p, 1), cfg, 1);
  CohortRun r{analyze(std::move(data), cfg, 1), 0.0};
  r.seconds = seconds_since(t0);
  return r;
}

void criterion_recovery() {
  PipelineConfig cfg;
  cfg.seed = 1;
  const auto strong = run_cohort(GeneratorParams{}, cfg);
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& w : strong.result.data.windows) {
    lo = std::min(lo, w.size());
    hi = std::max(hi, w.size());
  }
  const bool count_ok = std::abs(static_cast<double>(lo) - 312.0) <= 31.2 &&
                        std::abs(static_cast<double>(hi) - 312.0) <= 31.2;
  const auto* mm = strong.result.sweep.flagged(Schema::multimodal, ClassifierKind::rf);
  const auto* um = strong.result.sweep.flagged(Schema::unimodal, ClassifierKind::rf);
  const Comparison* contrast = nullptr;
  for (const auto& c : strong.result.comparisons) {
    if (c.model_a == "multimodal_rf" && c.model_b == "unimodal_rf") contrast = &c;
  }
  const bool kappa_ok = mm != nullptr && mm->kappa >= 0.5;
  const bool order_ok = mm != nullptr && um != nullptr && mm->kappa > um->kappa && contrast != nullptr;

  PipelineConfig hr_cfg = cfg;
  hr_cfg.schemas = {Schema::multimodal};
  hr_cfg.kinds = {ClassifierKind::rf};
  const auto hr = run_cohort(GeneratorParams::hr_only(), hr_cfg);
  std::array<double, 3> groups{};
  for (const auto& [name, imp] : hr.result.importances) {
    if (name == "multimodal_rf") groups = imp.group_percent;
  }
  const bool hr_ok = groups[2] > groups[0] && groups[2] > groups[1];
  const double total = strong.seconds + hr.seconds;

  report(5, count_ok && kappa_ok && order_ok && hr_ok && total <= 600.0,
         fmt("(a) segments per window %zu..%zu vs 312; (b) multimodal RF test kappa %.3f at %g s; (c) unimodal RF "
             "kappa %.3f, McNemar chi2=%.3f p=%.4f; (d) HR-only importance pupil %.1f%% eda %.1f%% hr %.1f%%; "
             "runtime %.0f s",
             lo, hi, mm ? mm->kappa : NAN, mm ? mm->window_s : NAN, um ? um->kappa : NAN,
             contrast ? contrast->result.statistic : NAN, contrast ? contrast->result.p_value : NAN, groups[0],
             groups[1], groups[2], total));
}

void criterion_null() {
  PipelineConfig cfg;
  cfg.seed = 1;
  cfg.window_selection = WindowSelection::validation_kappa;
  const auto run = run_cohort(GeneratorParams::null_effect(), cfg);
  const SweepRow* best = nullptr;
  for (const auto* r : run.result.sweep.flagged()) {
    if (best == nullptr || r->cv_kappa > best->cv_kappa) best = r;
  }
  double max_test = -1.0;
  for (const auto* r : run.result.sweep.flagged()) max_test = std::max(max_test, r->kappa);
  const bool pass = best != nullptr && std::abs(best->kappa) <= 0.15;
  report(6, pass,
         fmt("zero-effect cohort, model and window chosen by cross-validated kappa: best is %s_%s at %g s, cv kappa "
             "%.3f, test kappa %.3f (largest test kappa among the 12 selected models %.3f)",
             best ? std::string(to_string(best->schema)).c_str() : "-",
             best ? std::string(to_string(best->kind)).c_str() : "-", best ? best->window_s : NAN,
             best ? best->cv_kappa : NAN, best ? best->kappa : NAN, max_test));
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<fs::path> files_under(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), dir));
  }
  std::sort(out.begin(), out.end());
  return out;
}

fs::path criterion_reproducibility() {
  const auto root = fixture::temp_dir("acceptance-repro");
  {
    std::ofstream(root / "params.json") << R"({"n_participants": 8})";
    std::ofstream(root / "config.json") << R"({"seed": 9})";
  }
  const std::string bin = COGLOAD_BIN;
  const std::string quiet = " > " + (root / "log.txt").string() + " 2>&1";
  int rc = shell(bin + " synth --config " + (root / "params.json").string() + " --out " + (root / "data").string() +
                 " --jobs 2" + quiet);
  const int rc1 = shell(bin + " run --config " + (root / "config.json").string() + " --data " +
                        (root / "data").string() + " --out " + (root / "jobs1").string() + " --jobs 1" + quiet);
  const int rc3 = shell(bin + " run --config " + (root / "config.json").string() + " --data " +
                        (root / "data").string() + " --out " + (root / "jobs3").string() + " --jobs 3" + quiet);
  bool same = rc == 0 && rc1 == 0 && rc3 == 0;
  std::size_t csvs = 0, files = 0;
  if (same) {
    const auto a = files_under(root / "jobs1");
    const auto b = files_under(root / "jobs3");
    same = a == b;
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = fixture::read_file(root / "jobs1" / a[i]) == fixture::read_file(root / "jobs3" / a[i]);
      csvs += a[i].extension() == ".csv";
      ++files;
    }
  }
  report(7, same && csvs > 0,
         fmt("cogload run with --jobs 1 and --jobs 3 on an 8-participant cohort: exit %d/%d, %zu files (%zu CSV) %s",
             rc1, rc3, files, csvs, same ? "byte-identical" : "DIFFER"));
  return root / "jobs1";
}

void criterion_report_shape(const fs::path& out) {
  std::istringstream in(fixture::read_file(out / "sweep.csv"));
  std::string line;
  std::getline(in, line);  // provenance
  std::getline(in, line);
  const bool header_ok = line == "schema,kind,kappa,accuracy,window_s,hyperparameters";
  const std::set<std::string> allowed{"30", "60", "90", "120", "150", "180", "210"};
  std::set<std::string> combos;
  std::size_t rows = 0;
  bool windows_ok = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ++rows;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 6) {
      windows_ok = false;
      continue;
    }
    combos.insert(f[0] + "/" + f[1]);
    windows_ok = windows_ok && allowed.contains(f[4]);
  }
  report(8, header_ok && rows == 12 && combos.size() == 12 && windows_ok,
         fmt("sweep.csv: %zu flagged rows, %zu distinct schema/classifier pairs, windows within 30..210 s: %s",
             rows, combos.size(), windows_ok ? "yes" : "no"));
}

}  // namespace

int main() {
  try {
    criterion_filter();
    criterion_features();
    criterion_stats();
    criterion_leakage();
    criterion_recovery();
    criterion_null();
    const auto out = criterion_reproducibility();
    criterion_report_shape(out);
  } catch (const std::exception& e) {
    std::printf("FAIL  aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
