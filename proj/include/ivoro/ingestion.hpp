// SPDX-License-Identifier: Apache-2.0
#pragma once

// Feature datasets, the IVFS binary container, phase manifests, and a seeded
// synthetic generator used in place of CNN features at desk scale.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ivoro/types.hpp"

namespace ivoro {

/// Labeled feature rows. Values are held in double precision for
/// computation; on disk they are f32, so datasets built from f32 data
/// round-trip exactly.
struct FeatureDataset {
  std::size_t n_dims = 0;
  std::vector<ClassId> labels;
  std::vector<double> features;  // labels.size() x n_dims, row-major
  std::vector<std::uint8_t> rotations;  // empty, or one tag 0..3 per row

  std::size_t size() const noexcept { return labels.size(); }
  bool has_rotations() const noexcept { return !rotations.empty(); }

  std::span<const double> row(std::size_t i) const { return {features.data() + i * n_dims, n_dims}; }
  std::span<double> row(std::size_t i) { return {features.data() + i * n_dims, n_dims}; }

  void push_back(ClassId label, std::span<const double> feature, std::optional<std::uint8_t> rotation = {});

  /// Distinct labels in ascending order.
  std::vector<ClassId> classes() const;

  /// Throws DataError when sizes or tags are inconsistent.
  void validate() const;

  friend bool operator==(const FeatureDataset&, const FeatureDataset&) = default;
};

// ---------------------------------------------------------------------------
// IVFS container
//
//   "IVFS" | u16 version=1 | u8 dtype=1 (f32 LE) | u8 flags (bit0: rotation tags)
//   | u32 n_dims | u64 n_samples | n_samples x u32 labels
//   | [n_samples x u8 rotation tags] | n_samples x n_dims f32 row-major
//
// All integers little-endian.
// ---------------------------------------------------------------------------

inline constexpr std::uint16_t kIvfsVersion = 1;
inline constexpr std::uint8_t kIvfsDtypeF32 = 1;
inline constexpr std::size_t kIvfsHeaderSize = 20;

struct IvfsHeader {
  std::uint16_t version = kIvfsVersion;
  std::uint8_t dtype = kIvfsDtypeF32;
  std::uint8_t flags = 0;
  std::uint32_t n_dims = 0;
  std::uint64_t n_samples = 0;
};

std::vector<std::uint8_t> serialize_features(const FeatureDataset& ds);
FeatureDataset deserialize_features(std::span<const std::uint8_t> bytes);
IvfsHeader parse_ivfs_header(std::span<const std::uint8_t> bytes);

void write_features(const FeatureDataset& ds, const std::filesystem::path& path);
FeatureDataset read_features(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

// ---------------------------------------------------------------------------
// Phase manifest
// ---------------------------------------------------------------------------

struct LayerFiles {
  std::string name;
  std::filesystem::path train;
  std::filesystem::path test;
};

struct PhaseManifest {
  std::vector<std::vector<ClassId>> phases;
  int augmentations = 1;  // 1 or 4
  std::vector<LayerFiles> layers;

  /// Structural checks (disjoint phases, augmentation factor, layer names).
  void validate() const;
};

inline constexpr int kManifestVersion = 1;

/// Parses manifest JSON. Relative layer paths are resolved against
/// `base_dir`. File existence is not checked here.
PhaseManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir = {});

/// Loads a manifest file and verifies that every referenced file exists.
PhaseManifest load_manifest(const std::filesystem::path& path);

/// Serializes with layer paths written relative to `base_dir` when possible.
std::string dump_manifest(const PhaseManifest& manifest, const std::filesystem::path& base_dir = {});

void save_manifest(const PhaseManifest& manifest, const std::filesystem::path& path);

/// One dataset per manifest phase holding exactly that phase's classes in
/// original row order. Every label in `ds` must be listed exactly once.
std::vector<FeatureDataset> split_phases(const FeatureDataset& ds, const PhaseManifest& manifest);

/// Rows of `ds` whose label is in `classes`, order preserved.
FeatureDataset select_classes(const FeatureDataset& ds, std::span<const ClassId> classes);

// ---------------------------------------------------------------------------
// Synthetic features
// ---------------------------------------------------------------------------

struct SynthConfig {
  std::size_t n_classes = 10;
  std::size_t n_dims = 16;
  std::size_t samples_per_class = 100;
  double spread = 10.0;            // radius of the ball class means are drawn from
  double covariance_scale = 1.0;   // per-dimension standard deviation
  double anisotropy = 1.0;         // >= 1; per-class, per-dim std factor in [1/a, a]
  double rotation_offset = 0.0;    // magnitude of per-rotation offsets
  int augmentations = 1;           // 1, or 4 to emit rotation-tagged rows
  std::size_t layers = 1;          // independent feature spaces sharing labels
  std::uint64_t seed = 0;

  void validate() const;
};

/// Isotropic or axis-anisotropic Gaussian blobs, one per class; rows grouped
/// per sample when augmentations == 4 (tags 0,1,2,3 consecutive). Values are
/// rounded to f32. Uses layer 0 of the generator.
FeatureDataset synth_gaussian(const SynthConfig& cfg);

struct SynthSplit {
  std::vector<FeatureDataset> train;  // one per layer
  std::vector<FeatureDataset> test;   // one per layer
  std::vector<Matrix> means;          // per layer, n_classes x n_dims
};

/// Train/test split at 5:1 per class (test gets max(1, samples_per_class / 5)
/// samples), all layers drawn from the same seed.
SynthSplit synth_benchmark(const SynthConfig& cfg);

/// Manifest whose first phase holds half of the classes and the remainder is
/// split as evenly as possible over `n_phases - 1` phases.
std::vector<std::vector<ClassId>> half_then_even_phases(std::size_t n_classes, std::size_t n_phases);

/// Split into `n_phases` phases of near-equal size, earlier phases larger.
std::vector<std::vector<ClassId>> even_phases(std::size_t n_classes, std::size_t n_phases);

}  // namespace ivoro
