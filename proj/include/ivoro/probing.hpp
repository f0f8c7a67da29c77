// SPDX-License-Identifier: Apache-2.0
#pragma once

// Voronoi-constrained logistic regression. The bias of every class is tied
// to its weight row by b_k = -1/4 ||W_k||^2, so the trained classifier is a
// Voronoi diagram with centers W_k / 2. The residual variant starts from
// W = 2 * prototype and only learns a displacement, held in check by an L2
// penalty of strength beta.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ivoro/geometry.hpp"
#include "ivoro/ingestion.hpp"

namespace ivoro {

/// How the bias participates in the gradient.
///  - fixed_bias: the bias is a leaf that is re-projected onto the
///    constraint once per epoch (training default).
///  - coupled: the bias is a function of W and is differentiated through;
///    re-projected after every step.
enum class GradientMode { fixed_bias, coupled };

struct ProbeConfig {
  int epochs = 50;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;  // beta, applied to the residual displacement only
  std::uint64_t seed = 0;
  bool shuffle = true;
  GradientMode gradient_mode = GradientMode::fixed_bias;

  void validate() const;
};

/// Mean of -log softmax(W z + b)[y] over the batch. Labels are mapped to
/// rows through `probe.class_ids`.
double cross_entropy_loss(const LinearProbe& probe, const FeatureDataset& batch);

/// Gradient of `cross_entropy_loss` with respect to W. In coupled mode the
/// bias is treated as -1/4 ||W_k||^2 (the probe's stored bias is ignored).
Matrix cross_entropy_gradient(const LinearProbe& probe, const FeatureDataset& batch, GradientMode mode);

/// Loss of the residual objective: CE(W0 + dW, constrained bias) + beta ||dW||^2.
double residual_loss(const Matrix& base, const Matrix& delta, std::span<const ClassId> class_ids,
                     const FeatureDataset& batch, double beta);

/// Gradient of `residual_loss` with respect to dW (bias coupled to W0 + dW).
Matrix residual_gradient(const Matrix& base, const Matrix& delta, std::span<const ClassId> class_ids,
                         const FeatureDataset& batch, double beta);

/// Trains a constrained probe on one phase's data. When `init` is given
/// (one center per class, ascending class id) training starts from
/// W = 2 * center, otherwise from zero.
LinearProbe train_probe(const FeatureDataset& data, const ProbeConfig& cfg,
                        std::optional<std::span<const Center>> init = std::nullopt);

/// Residual training around prototypes; returns centers (W0 + dW) / 2 with
/// kind residual, aligned with `prototypes`.
std::vector<Center> train_residual_probe(std::span<const Center> prototypes, const FeatureDataset& data,
                                         const ProbeConfig& cfg);

/// Fraction of rows whose nearest center (by assign_cell) carries the row's label.
double nearest_center_accuracy(std::span<const Center> centers, const FeatureDataset& data);

}  // namespace ivoro
