// SPDX-License-Identifier: Apache-2.0
#pragma once

// Class-incremental model: one clique of centers per phase, merged by a
// divide-and-conquer rule at query time. Snapshots are immutable values;
// adding a phase shares the existing cliques with the previous snapshot.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ivoro/geometry.hpp"
#include "ivoro/ingestion.hpp"
#include "ivoro/probing.hpp"
#include "ivoro/transforms.hpp"

namespace ivoro {

struct PhaseClique {
  PhaseId phase_id = 0;
  std::vector<ClassId> class_ids;  // ascending
  std::vector<Center> prototypes;
  std::optional<std::vector<Center>> probing_centers;
  std::optional<std::vector<Center>> residual_centers;

  std::size_t size() const noexcept { return class_ids.size(); }
  const std::vector<Center>* centers(CenterKind kind) const;

  friend bool operator==(const PhaseClique&, const PhaseClique&) = default;
};

enum class QueryRule : std::uint8_t {
  two_stage = 0,   // within-clique winners, then cross-clique comparison
  tournament = 1,  // pairwise elimination in phase-major, class-index order
};

struct ModelMode {
  bool use_dnc = false;
  bool use_residual = false;
  QueryRule rule = QueryRule::two_stage;

  friend bool operator==(const ModelMode&, const ModelMode&) = default;
};

class IncrementalModel {
 public:
  IncrementalModel() = default;
  IncrementalModel(std::size_t dim, ModelMode mode, TransformParams transform = {});

  std::size_t dim() const noexcept { return dim_; }
  const ModelMode& mode() const noexcept { return mode_; }
  const TransformParams& transform() const noexcept { return transform_; }
  std::size_t num_cliques() const noexcept { return cliques_.size(); }
  const PhaseClique& clique(std::size_t i) const { return *cliques_.at(i); }
  std::span<const std::shared_ptr<const PhaseClique>> cliques() const noexcept { return cliques_; }
  std::size_t num_classes() const;
  std::vector<ClassId> class_ids() const;

  /// Snapshot with one more clique appended. Used by add_phase and model loading.
  IncrementalModel with_clique(PhaseClique clique) const;

  /// Same cliques, different query behaviour.
  IncrementalModel with_mode(ModelMode mode) const;

  /// Centers compared within a clique (probing when D&C is on, residual when
  /// only residual is on, otherwise prototypes).
  const std::vector<Center>& within_centers(const PhaseClique& c) const;
  /// Centers compared across cliques (residual when enabled, otherwise prototypes).
  const std::vector<Center>& cross_centers(const PhaseClique& c) const;

 private:
  std::size_t dim_ = 0;
  ModelMode mode_{};
  TransformParams transform_{};
  std::vector<std::shared_ptr<const PhaseClique>> cliques_;
};

/// Per-class arithmetic means, ascending class id, weight 0, kind prototype.
std::vector<Center> compute_prototypes(const FeatureDataset& data, PhaseId phase_id = 0);

/// Builds the next clique from one phase of (already transformed) data and
/// returns the new snapshot. The input model is left untouched.
IncrementalModel add_phase(const IncrementalModel& model, const FeatureDataset& data, const ProbeConfig& cfg);

/// Predicted class for a transformed query.
ClassId predict(const IncrementalModel& model, std::span<const double> z);

/// Flat nearest-center over every center of one kind across all cliques.
ClassId predict_oracle(const IncrementalModel& model, std::span<const double> z, CenterKind kind);

/// Center used for class `id` by the cross-clique rule, or nullptr.
const Center* find_cross_center(const IncrementalModel& model, ClassId id);

// ---------------------------------------------------------------------------
// IVMD snapshot container
//
//   "IVMD" | u16 version=1 | u8 mode flags (bit0 dnc, bit1 residual,
//   bit2 tournament) | u8 transform flags (bit0 enabled, bit1 clamp)
//   | f64 w | f64 eta | f64 lambda | f64 eps | u32 dim | u32 n_cliques
//   | cliques in phase order
//
// clique: i32 phase_id | u32 K | K x u32 class ids | u8 present (bit0
// probing, bit1 residual) | K x dim f32 prototypes | [probing] | [residual]
//
// Centers are stored as f32 rows; loading yields f32-rounded centers and
// re-serializing a loaded model reproduces the bytes exactly.
// ---------------------------------------------------------------------------

inline constexpr std::uint16_t kIvmdVersion = 1;

std::vector<std::uint8_t> serialize_clique(const PhaseClique& clique);
std::vector<std::uint8_t> serialize_model(const IncrementalModel& model);
IncrementalModel deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const IncrementalModel& model, const std::filesystem::path& path);
IncrementalModel load_model(const std::filesystem::path& path);

}  // namespace ivoro
