// SPDX-License-Identifier: Apache-2.0
//
// ivoro: synthetic feature generation, incremental benchmark runs, report
// rendering, and container inspection.
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime error.
// IVORO_LOG_LEVEL (trace|debug|info|warn|error|off) sets log verbosity.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "ivoro/bench.hpp"
#include "ivoro/error.hpp"
#include "ivoro/incremental.hpp"
#include "ivoro/ingestion.hpp"
#include "ivoro/simd/kernels.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

void configure_logging() {
  spdlog::set_pattern("[%l] %v");
  if (const char* level = std::getenv("IVORO_LOG_LEVEL")) {
    spdlog::set_level(spdlog::level::from_str(level));
  }
}

ivoro::simd::KernelLevel parse_simd(const std::string& s) {
  if (const auto level = ivoro::simd::parse_level(s)) return *level;
  throw ivoro::ConfigError("unknown --simd level '" + s + "'");
}

struct SynthArgs {
  ivoro::SynthConfig cfg;
  std::size_t phases = 4;
  std::string split = "half";
  fs::path out;
};

int run_synth(const SynthArgs& a) {
  a.cfg.validate();
  const auto split = ivoro::synth_benchmark(a.cfg);
  fs::create_directories(a.out);
  ivoro::PhaseManifest m;
  m.augmentations = a.cfg.augmentations;
  if (a.split == "half") {
    m.phases = ivoro::half_then_even_phases(a.cfg.n_classes, a.phases);
  } else if (a.split == "even") {
    m.phases = ivoro::even_phases(a.cfg.n_classes, a.phases);
  } else {
    throw ivoro::ConfigError("--split must be 'half' or 'even'");
  }
  for (std::size_t l = 0; l < a.cfg.layers; ++l) {
    const std::string name = l == 0 ? "final" : "layer" + std::to_string(l);
    ivoro::LayerFiles files{name, a.out / (name + "_train.ivfs"), a.out / (name + "_test.ivfs")};
    ivoro::write_features(split.train[l], files.train);
    ivoro::write_features(split.test[l], files.test);
    spdlog::info("layer {}: {} train rows, {} test rows, {} dims", name, split.train[l].size(), split.test[l].size(),
                 split.train[l].n_dims);
    m.layers.push_back(std::move(files));
  }
  m.validate();
  ivoro::save_manifest(m, a.out / "manifest.json");
  std::cout << "wrote " << (a.out / "manifest.json").string() << "\n";
  return 0;
}

void print_report(const ivoro::EvalReport& r) {
  std::cout << "mode: " << (r.mode.empty() ? "(base)" : r.mode) << "\n";
  std::cout << "phase  accuracy  avg_accuracy  avg_forgetting\n";
  for (std::size_t t = 0; t < r.phase_accuracy.size(); ++t) {
    char line[128];
    std::snprintf(line, sizeof line, "%5zu  %8.2f  %12.2f  %14.2f\n", t, r.phase_accuracy[t], r.avg_accuracy[t],
                  r.avg_forgetting[t]);
    std::cout << line;
  }
  std::cout << "last accuracy: " << r.last_accuracy << "\n";
  if (r.hv_delta_pearson) std::cout << "pearson(HV, delta accuracy): " << *r.hv_delta_pearson << "\n";
}

int inspect(const fs::path& path) {
  const auto bytes = ivoro::read_file_bytes(path);
  std::cout << "simd kernels: " << ivoro::simd::to_string(ivoro::simd::active().level) << "\n";
  if (bytes.size() >= 4 && std::string(bytes.begin(), bytes.begin() + 4) == "IVMD") {
    const auto model = ivoro::deserialize_model(bytes);
    std::cout << "IVMD model v" << ivoro::kIvmdVersion << ": dim " << model.dim() << ", " << model.num_cliques()
              << " cliques, " << model.num_classes() << " classes\n";
    std::cout << "  mode: dnc=" << model.mode().use_dnc << " residual=" << model.mode().use_residual
              << " rule=" << (model.mode().rule == ivoro::QueryRule::tournament ? "tournament" : "two_stage") << "\n";
    const auto& t = model.transform();
    std::cout << "  transform: enabled=" << t.enabled << " w=" << t.scale << " eta=" << t.shift
              << " lambda=" << t.lambda << " eps=" << t.epsilon << "\n";
    for (std::size_t i = 0; i < model.num_cliques(); ++i) {
      const auto& c = model.clique(i);
      std::cout << "  clique " << c.phase_id << ": " << c.size() << " classes, probing="
                << (c.probing_centers ? "yes" : "no") << " residual=" << (c.residual_centers ? "yes" : "no") << "\n";
    }
    return 0;
  }
  const auto h = ivoro::parse_ivfs_header(bytes);
  const auto ds = ivoro::deserialize_features(bytes);
  std::cout << "IVFS features v" << h.version << ": " << h.n_samples << " samples x " << h.n_dims
            << " dims, dtype f32, rotation tags " << ((h.flags & 1) ? "present" : "absent") << "\n";
  std::cout << "  classes: " << ds.classes().size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Incremental Voronoi-diagram classification over feature vectors"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel level: auto, scalar, avx2, neon");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate seeded Gaussian-blob feature files and a manifest");
  synth_cmd->add_option("--classes", synth.cfg.n_classes, "Number of classes");
  synth_cmd->add_option("--dims", synth.cfg.n_dims, "Feature dimensionality");
  synth_cmd->add_option("--samples", synth.cfg.samples_per_class, "Training samples per class");
  synth_cmd->add_option("--spread", synth.cfg.spread, "Radius of the class-mean ball");
  synth_cmd->add_option("--cov", synth.cfg.covariance_scale, "Per-dimension standard deviation");
  synth_cmd->add_option("--anisotropy", synth.cfg.anisotropy, "Per-class axis std factor range [1/a, a]");
  synth_cmd->add_option("--rotation-offset", synth.cfg.rotation_offset, "Magnitude of per-rotation offsets");
  synth_cmd->add_option("--augmentations", synth.cfg.augmentations, "1, or 4 for rotation-tagged rows");
  synth_cmd->add_option("--layers", synth.cfg.layers, "Number of feature layers");
  synth_cmd->add_option("--seed", synth.cfg.seed, "Generator seed");
  synth_cmd->add_option("--phases", synth.phases, "Number of phases");
  synth_cmd->add_option("--split", synth.split, "Phase split: half (base phase holds half the classes) or even");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();

  fs::path config_path;
  ivoro::RunConfig run;
  std::string mode;
  std::string gradient_mode;
  bool clamp = false, diagonal = false, tournament = false;
  auto* run_cmd = app.add_subcommand("run", "Run a class-incremental protocol and write a report");
  run_cmd->add_option("--config", config_path, "Run config JSON; flags override its fields");
  auto* o_manifest = run_cmd->add_option("--manifest", run.manifest, "Phase manifest JSON");
  auto* o_mode = run_cmd->add_option("--mode", mode, "Ablation components, e.g. NDAIL (empty for base)");
  auto* o_output = run_cmd->add_option("--output", run.output_dir, "Output directory for report and models");
  auto* o_seed = run_cmd->add_option("--seed", run.seed, "Seed for probe training");
  auto* o_epochs = run_cmd->add_option("--epochs", run.probe.epochs, "Probe epochs");
  auto* o_batch = run_cmd->add_option("--batch-size", run.probe.batch_size, "Probe mini-batch size");
  auto* o_lr = run_cmd->add_option("--lr", run.probe.learning_rate, "Probe learning rate");
  auto* o_beta = run_cmd->add_option("--beta", run.probe.weight_decay, "Residual weight decay");
  auto* o_grad = run_cmd->add_option("--gradient-mode", gradient_mode, "fixed_bias or coupled");
  auto* o_gamma = run_cmd->add_option("--gamma", run.gamma, "Layered influence exponent");
  auto* o_lambda = run_cmd->add_option("--lambda", run.transform.lambda, "Tukey exponent");
  auto* o_scale = run_cmd->add_option("--scale", run.transform.scale, "Transform scale w");
  auto* o_shift = run_cmd->add_option("--shift", run.transform.shift, "Transform shift eta");
  auto* o_eps = run_cmd->add_option("--epsilon", run.transform.epsilon, "Tukey positivity floor");
  run_cmd->add_flag("--clamp-negative", clamp, "Clamp negative transformed values instead of rejecting");
  run_cmd->add_flag("--diagonal", diagonal, "Use only matching-rotation pairs for consensus/integration");
  run_cmd->add_flag("--tournament", tournament, "Use the sequential elimination query rule");

  fs::path report_input, report_output;
  auto* report_cmd = app.add_subcommand("report", "Print a report and optionally re-render its files");
  report_cmd->add_option("input", report_input, "report.json or a directory containing it")->required();
  report_cmd->add_option("--output", report_output, "Directory to re-emit report files into");

  fs::path inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Dump the header of an IVFS feature file or IVMD model");
  inspect_cmd->add_option("path", inspect_path, "File to inspect")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (simd != "auto") ivoro::simd::set_active_level(parse_simd(simd));
    spdlog::debug("simd kernels: {}", ivoro::simd::to_string(ivoro::simd::active().level));

    if (*synth_cmd) return run_synth(synth);

    if (*run_cmd) {
      ivoro::RunConfig cfg = config_path.empty() ? ivoro::RunConfig{} : ivoro::load_run_config(config_path);
      if (*o_manifest) cfg.manifest = run.manifest;
      if (*o_mode) cfg.mode = ivoro::parse_mode(mode);
      if (*o_output) cfg.output_dir = run.output_dir;
      if (*o_seed) cfg.seed = run.seed;
      if (*o_epochs) cfg.probe.epochs = run.probe.epochs;
      if (*o_batch) cfg.probe.batch_size = run.probe.batch_size;
      if (*o_lr) cfg.probe.learning_rate = run.probe.learning_rate;
      if (*o_beta) cfg.probe.weight_decay = run.probe.weight_decay;
      if (*o_grad) {
        if (gradient_mode == "coupled") {
          cfg.probe.gradient_mode = ivoro::GradientMode::coupled;
        } else if (gradient_mode == "fixed_bias") {
          cfg.probe.gradient_mode = ivoro::GradientMode::fixed_bias;
        } else {
          throw ivoro::ConfigError("--gradient-mode must be fixed_bias or coupled");
        }
      }
      if (*o_gamma) cfg.gamma = run.gamma;
      if (*o_lambda) cfg.transform.lambda = run.transform.lambda;
      if (*o_scale) cfg.transform.scale = run.transform.scale;
      if (*o_shift) cfg.transform.shift = run.transform.shift;
      if (*o_eps) cfg.transform.epsilon = run.transform.epsilon;
      if (clamp) cfg.transform.negative_policy = ivoro::NegativePolicy::clamp;
      if (diagonal) cfg.diagonal_augmentation = true;
      if (tournament) cfg.query_rule = ivoro::QueryRule::tournament;

      spdlog::info("running mode '{}' on {}", cfg.mode.to_string(), cfg.manifest.string());
      const auto report = ivoro::run_protocol(cfg);
      print_report(report);
      if (!cfg.output_dir.empty()) spdlog::info("report written to {}", cfg.output_dir.string());
      return 0;
    }

    if (*report_cmd) {
      const fs::path file = fs::is_directory(report_input) ? report_input / ivoro::kReportJson : report_input;
      const auto report = ivoro::load_report(file);
      print_report(report);
      if (!report_output.empty()) ivoro::emit_report(report, report_output);
      return 0;
    }

    if (*inspect_cmd) return inspect(inspect_path);
  } catch (const ivoro::Error& e) {
    spdlog::error("{}", e.what());
    switch (e.category()) {
      case ivoro::ErrorCategory::config: return kExitConfig;
      case ivoro::ErrorCategory::data: return kExitData;
      case ivoro::ErrorCategory::runtime: return kExitRuntime;
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return 0;
}
