#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cogload/config.hpp"
#include "cogload/csv.hpp"
#include "cogload/error.hpp"
#include "cogload/pipeline.hpp"
#include "cogload/synth.hpp"

namespace {

using namespace cogload;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_windows(const std::string& text) {
  std::vector<double> out;
  for (auto part : csv::split(text, ',')) {
    const auto v = csv::parse_double(part);
    if (!v) throw Error(ErrorCode::InvalidConfig, "--windows: '" + std::string(part) + "' is not a number");
    out.push_back(*v);
  }
  return out;
}

PipelineConfig read_config(const std::string& path) {
  if (path.empty()) return PipelineConfig{};
  try {
    return load_config(path);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MissingFile) throw UsageError("config file not found: " + path);
    throw;
  }
}

struct PipelineArgs {
  std::string config;
  std::string data;
  std::string out;
  std::string windows;
  std::string schema;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
};

void add_pipeline_options(CLI::App* cmd, PipelineArgs& a, bool needs_data) {
  cmd->add_option("--config", a.config, "Pipeline configuration (JSON)");
  auto* data = cmd->add_option("--data", a.data, "Directory of recorded sessions");
  if (needs_data) data->required();
  cmd->add_option("--out", a.out, "Output directory (default: output_dir from the config)");
  cmd->add_option("--windows", a.windows, "Comma-separated window lengths in seconds");
  cmd->add_option("--schema", a.schema, "unimodal, multimodal or both");
  cmd->add_option("--seed", a.seed, "Random seed");
  cmd->add_option("--jobs", a.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

PipelineConfig effective_config(const PipelineArgs& a) {
  PipelineConfig cfg = read_config(a.config);
  if (!a.windows.empty()) cfg.windows = parse_windows(a.windows);
  if (a.seed) cfg.seed = *a.seed;
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (!a.schema.empty() && a.schema != "both") {
    const auto s = parse_schema(a.schema);
    if (!s) throw Error(ErrorCode::InvalidConfig, "--schema: expected unimodal, multimodal or both");
    cfg.schemas = {*s};
  }
  cfg.validate();
  return cfg;
}

int cmd_run(const PipelineArgs& a) {
  const auto cfg = effective_config(a);
  RunOptions opt{a.data, cfg.output_dir, a.jobs, &std::cerr};
  run_pipeline(cfg, opt);
  return 0;
}

int cmd_extract(const PipelineArgs& a) {
  const auto cfg = effective_config(a);
  Schema schema = Schema::multimodal;
  if (!a.schema.empty()) {
    const auto s = parse_schema(a.schema);
    if (!s) throw Error(ErrorCode::InvalidConfig, "--schema: extract takes unimodal or multimodal");
    schema = *s;
  }
  RunOptions opt{a.data, cfg.output_dir, a.jobs, &std::cerr};
  const auto rows = extract_features(cfg, schema, opt);
  std::cerr << "wrote " << rows << " feature rows to " << (opt.out_dir / "features.csv").string() << '\n';
  return 0;
}

int cmd_synth(const std::string& params_path, const std::string& out, std::optional<std::uint64_t> seed,
              unsigned jobs) {
  GeneratorParams p;
  if (!params_path.empty()) {
    std::ifstream in(params_path, std::ios::binary);
    if (!in) throw UsageError("params file not found: " + params_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidParams, params_path + ": " + e.what());
    }
    p = params_from_json(j);
  }
  if (seed) p.seed = *seed;
  p.validate();
  write_cohort(p, out, jobs);
  std::cerr << "wrote " << p.n_participants << " sessions to " << out << '\n';
  return 0;
}

int cmd_stats(const std::vector<std::string>& files, const std::string& out, const std::string& config) {
  const auto cfg = read_config(config);
  std::vector<std::filesystem::path> paths(files.begin(), files.end());
  run_stats(paths, out.empty() ? std::filesystem::path(cfg.output_dir) : std::filesystem::path(out),
            McNemarOptions{cfg.mcnemar_continuity_correction});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cognitive load modeling from pupil, EDA and heart-rate recordings"};
  app.require_subcommand(1);

  std::string synth_config, synth_out;
  std::optional<std::uint64_t> synth_seed;
  unsigned synth_jobs = 1;
  auto* synth = app.add_subcommand("synth", "Write a synthetic cohort with planted load effects");
  synth->add_option("--config", synth_config, "Generator parameters (JSON)");
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--jobs", synth_jobs, "Worker threads")->check(CLI::PositiveNumber);

  PipelineArgs extract_args, run_args;
  auto* extract = app.add_subcommand("extract", "Write windowed features for every session");
  add_pipeline_options(extract, extract_args, true);
  auto* run = app.add_subcommand("run", "Clean, segment, sweep windows and models, and compare them");
  add_pipeline_options(run, run_args, true);

  std::vector<std::string> stats_files;
  std::string stats_out, stats_config;
  auto* stats = app.add_subcommand("stats", "Metrics and paired tests over prediction files");
  stats->add_option("predictions", stats_files, "predictions CSV files (segment_id,truth,prediction)")->required();
  stats->add_option("--out", stats_out, "Output directory");
  stats->add_option("--config", stats_config, "Pipeline configuration (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_config, synth_out, synth_seed, synth_jobs);
    if (extract->parsed()) return cmd_extract(extract_args);
    if (run->parsed()) return cmd_run(run_args);
    if (stats->parsed()) return cmd_stats(stats_files, stats_out, stats_config);
  } catch (const UsageError& e) {
    std::cerr << "cogload: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "cogload: " << e.what() << '\n';
    const bool usage = e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::InvalidParams ||
                       e.code() == ErrorCode::InvalidEdges;
    return usage ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "cogload: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
