// SPDX-License-Identifier: Apache-2.0
#pragma once

// Class-incremental benchmark harness: runs a phase protocol over feature
// files, evaluates every snapshot on the cumulative test classes, and emits
// reports.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ivoro/augment.hpp"
#include "ivoro/incremental.hpp"
#include "ivoro/ingestion.hpp"
#include "ivoro/probing.hpp"
#include "ivoro/transforms.hpp"

namespace ivoro {

/// Ablation components, spelled N, D, R, AC, AI, L in a mode string.
struct ModeFlags {
  bool normalize = false;
  bool dnc = false;
  bool residual = false;
  bool consensus = false;
  bool integration = false;
  bool layered = false;

  bool augmented() const noexcept { return consensus || integration; }
  std::string to_string() const;

  friend bool operator==(const ModeFlags&, const ModeFlags&) = default;
};

/// Parses strings such as "", "N", "NDAIL". Throws ConfigError on unknown or
/// repeated components and on AC together with AI.
ModeFlags parse_mode(std::string_view text);

struct RunConfig {
  ModeFlags mode;
  std::filesystem::path manifest;
  std::filesystem::path output_dir;  // empty: no files written
  ProbeConfig probe;
  TransformParams transform{.enabled = true};  // applied only when mode.normalize
  double gamma = 1.0;
  bool diagonal_augmentation = false;
  QueryRule query_rule = QueryRule::two_stage;
  std::uint64_t seed = 0;

  /// Checks that do not need the data. With a manifest, also checks the
  /// augmentation factor and layer count the mode requires.
  void validate(const PhaseManifest* manifest = nullptr) const;

  TransformParams effective_transform() const;
};

RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
std::string dump_run_config(const RunConfig& cfg);

struct ProtocolInputs {
  PhaseManifest manifest;
  std::vector<FeatureDataset> train;  // one per manifest layer
  std::vector<FeatureDataset> test;   // one per manifest layer, rows aligned across layers
};

/// Reads every layer file named by the manifest.
ProtocolInputs load_inputs(const PhaseManifest& manifest);

struct ClassUncertainty {
  ClassId class_id = 0;
  double mean_hv = 0.0;
  double baseline_accuracy = 0.0;   // percent, nearest-center on the unrotated query
  double augmented_accuracy = 0.0;  // percent, with consensus / integration
  double delta_accuracy() const { return augmented_accuracy - baseline_accuracy; }
};

struct LabeledPrediction {
  ClassId label = 0;
  ClassId predicted = 0;
  friend bool operator==(const LabeledPrediction&, const LabeledPrediction&) = default;
};

struct EvalReport {
  std::string mode;
  std::vector<std::vector<ClassId>> phases;
  // accuracy_matrix[t][tau], tau <= t: percent accuracy of snapshot t on
  // the test data of phase tau.
  std::vector<std::vector<double>> accuracy_matrix;
  std::vector<double> phase_accuracy;  // snapshot t on all classes seen so far
  std::vector<double> avg_accuracy;    // running mean of phase_accuracy, phase 0 included
  double last_accuracy = 0.0;
  std::vector<double> avg_forgetting;
  std::vector<ClassUncertainty> class_uncertainty;  // final phase, augmented modes only
  std::optional<double> hv_delta_pearson;
  // Per phase, every evaluated test sample in test-file order. Not emitted.
  std::vector<std::vector<LabeledPrediction>> predictions;
};

EvalReport run_protocol(const RunConfig& cfg);
EvalReport run_protocol(const RunConfig& cfg, const ProtocolInputs& inputs);

/// Mean over tau < t of (max_{tau <= s <= t} A[s][tau]) - A[t][tau]. Rows may
/// be shorter than t + 1; only tasks present in row t are averaged. 0 at t = 0.
double avg_forgetting(std::span<const std::vector<double>> accuracy, std::size_t t);

/// Percent of correct predictions; 0 for an empty list.
double accuracy_percent(std::span<const LabeledPrediction> predictions);

inline constexpr const char* kReportJson = "report.json";
inline constexpr const char* kReportCsv = "accuracy.csv";
inline constexpr const char* kReportSvg = "accuracy_curve.svg";

std::string report_to_json(const EvalReport& r);
std::string report_to_csv(const EvalReport& r);
std::string report_to_svg(const EvalReport& r);

/// Writes report.json, accuracy.csv and accuracy_curve.svg into `dir`.
void emit_report(const EvalReport& r, const std::filesystem::path& dir);

/// Parses report.json (predictions are not stored there).
EvalReport parse_report(const std::string& json_text);
EvalReport load_report(const std::filesystem::path& path);

}  // namespace ivoro
