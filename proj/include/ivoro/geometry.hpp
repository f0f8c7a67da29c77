// SPDX-License-Identifier: Apache-2.0
#pragma once

// Point location in power / Voronoi diagrams and the reduction of a
// bias-constrained linear classifier to a Voronoi diagram. All distances are
// squared Euclidean.

#include <cstddef>
#include <span>
#include <vector>

#include "ivoro/types.hpp"

namespace ivoro {

/// Hyperplane {z : normal . z - offset = 0}. Positive side belongs to the
/// first generating center.
struct Bisector {
  FeatureVector normal;
  double offset = 0.0;

  double evaluate(std::span<const double> z) const;
};

/// Multiclass linear classifier `W z + b`. Row k of `weights` and `bias[k]`
/// belong to `class_ids[k]`.
struct LinearProbe {
  Matrix weights;
  std::vector<double> bias;
  std::vector<ClassId> class_ids;
  bool constrained = false;

  std::size_t num_classes() const noexcept { return weights.rows(); }
  std::size_t dim() const noexcept { return weights.cols(); }
};

inline constexpr double kBiasConstraintTolerance = 1e-6;

/// ||z - c||^2 - c.weight
double power_score(std::span<const double> z, const Center& c);

/// Index of the center with minimal power score; ties go to the lowest index.
std::size_t assign_cell(std::span<const double> z, std::span<const Center> centers);

Bisector bisector(const Center& c1, const Center& c2);

/// b_k = -1/4 ||W_k||^2 for every row.
std::vector<double> constrain_bias(const Matrix& weights);

/// Largest relative deviation of the probe's bias from the constraint.
double bias_constraint_violation(const LinearProbe& probe);

/// Centers W_k / 2 (weight 0, kind probing) of a constrained probe.
/// Phase id is left at 0; callers that know the phase set it.
std::vector<Center> reduce_to_vd(const LinearProbe& probe);

/// Row scores W z + b.
std::vector<double> probe_scores(const LinearProbe& probe, std::span<const double> z);

/// Row index of the maximal score; ties go to the lowest index.
std::size_t probe_argmax(const LinearProbe& probe, std::span<const double> z);

}  // namespace ivoro
