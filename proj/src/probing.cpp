// SPDX-License-Identifier: Apache-2.0
#include "ivoro/probing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ivoro/error.hpp"
#include "ivoro/simd/kernels.hpp"

namespace ivoro {

void ProbeConfig::validate() const {
  if (epochs < 0) throw ConfigError("probe epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("probe batch size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("probe learning rate must be positive");
  if (!(weight_decay >= 0.0)) throw ConfigError("probe weight decay beta must be >= 0");
}

namespace {

// Row of each sample's label inside the probe, or a DataError.
std::vector<std::size_t> label_rows(std::span<const ClassId> class_ids, const FeatureDataset& data) {
  std::vector<std::size_t> rows(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto it = std::find(class_ids.begin(), class_ids.end(), data.labels[i]);
    if (it == class_ids.end()) {
      throw DataError("label " + std::to_string(data.labels[i]) + " is out of range for a probe over " +
                      std::to_string(class_ids.size()) + " classes");
    }
    rows[i] = static_cast<std::size_t>(it - class_ids.begin());
  }
  return rows;
}

void check_probe_shape(const Matrix& weights, std::size_t n_classes, const FeatureDataset& data) {
  if (weights.rows() != n_classes) throw DataError("probe class list does not match weight rows");
  if (weights.cols() != data.n_dims) {
    throw DataError("dimension mismatch: probe has " + std::to_string(weights.cols()) + " dims, data has " +
                    std::to_string(data.n_dims));
  }
}

// Sums CE loss over `indices` and, when `grad` is non-null, adds the summed
// gradient with respect to W. `bias` is used as given; in coupled mode the
// extra -W_k/2 term of ds_k/dW_k is added.
double accumulate(const Matrix& weights, std::span<const double> bias, GradientMode mode, const FeatureDataset& data,
                  std::span<const std::size_t> rows, std::span<const std::size_t> indices, Matrix* grad) {
  const std::size_t K = weights.rows();
  std::vector<double> scores(K), coeff_sum(K, 0.0);
  double loss = 0.0;
  for (std::size_t i : indices) {
    const auto z = data.row(i);
    for (std::size_t k = 0; k < K; ++k) scores[k] = simd::dot(weights.row(k), z) + bias[k];
    const double top = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (double s : scores) sum += std::exp(s - top);
    const double lse = top + std::log(sum);
    loss += lse - scores[rows[i]];
    if (grad == nullptr) continue;
    for (std::size_t k = 0; k < K; ++k) {
      const double coeff = std::exp(scores[k] - lse) - (k == rows[i] ? 1.0 : 0.0);
      simd::axpy(coeff, z, grad->row(k));
      coeff_sum[k] += coeff;
    }
  }
  if (grad != nullptr && mode == GradientMode::coupled) {
    for (std::size_t k = 0; k < K; ++k) simd::axpy(-0.5 * coeff_sum[k], weights.row(k), grad->row(k));
  }
  return loss;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

void scale(Matrix& m, double factor) {
  for (double& v : m.values()) v *= factor;
}

// Shared SGD loop. `weights` is the effective W; when `delta` is non-null it
// holds the trainable residual and `base` the frozen part (weights = base + delta).
void run_sgd(Matrix& weights, const Matrix* base, Matrix* delta, std::span<const ClassId> class_ids,
             const FeatureDataset& data, const ProbeConfig& cfg) {
  const auto rows = label_rows(class_ids, data);
  auto order = all_indices(data.size());
  std::mt19937_64 rng(cfg.seed);
  std::vector<double> bias;
  Matrix grad(weights.rows(), weights.cols());

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    bias = constrain_bias(weights);
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const std::span<const std::size_t> batch(order.data() + start, stop - start);
      std::fill(grad.values().begin(), grad.values().end(), 0.0);
      epoch_loss += accumulate(weights, bias, cfg.gradient_mode, data, rows, batch, &grad);
      const double step = -cfg.learning_rate / static_cast<double>(batch.size());
      if (delta == nullptr) {
        simd::axpy(step, grad.values(), weights.values());
      } else {
        // Proximal step on the L2 penalty: stable for any beta, equal to the
        // plain gradient step to first order in the learning rate.
        simd::axpy(step, grad.values(), delta->values());
        scale(*delta, 1.0 / (1.0 + 2.0 * cfg.learning_rate * cfg.weight_decay));
        std::copy(base->values().begin(), base->values().end(), weights.values().begin());
        simd::axpy(1.0, delta->values(), weights.values());
      }
      if (cfg.gradient_mode == GradientMode::coupled) bias = constrain_bias(weights);
    }
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("probe training diverged: non-finite loss at epoch " + std::to_string(epoch));
    }
  }
}

std::vector<ClassId> center_classes(std::span<const Center> centers) {
  std::vector<ClassId> ids;
  for (const auto& c : centers) ids.push_back(c.class_id);
  return ids;
}

}  // namespace

double cross_entropy_loss(const LinearProbe& probe, const FeatureDataset& batch) {
  check_probe_shape(probe.weights, probe.class_ids.size(), batch);
  if (batch.size() == 0) throw DataError("cross_entropy_loss: empty batch");
  const auto rows = label_rows(probe.class_ids, batch);
  const auto idx = all_indices(batch.size());
  return accumulate(probe.weights, probe.bias, GradientMode::fixed_bias, batch, rows, idx, nullptr) /
         static_cast<double>(batch.size());
}

Matrix cross_entropy_gradient(const LinearProbe& probe, const FeatureDataset& batch, GradientMode mode) {
  check_probe_shape(probe.weights, probe.class_ids.size(), batch);
  if (batch.size() == 0) throw DataError("cross_entropy_gradient: empty batch");
  const auto rows = label_rows(probe.class_ids, batch);
  const auto idx = all_indices(batch.size());
  const auto bias = mode == GradientMode::coupled ? constrain_bias(probe.weights) : probe.bias;
  Matrix grad(probe.weights.rows(), probe.weights.cols());
  accumulate(probe.weights, bias, mode, batch, rows, idx, &grad);
  scale(grad, 1.0 / static_cast<double>(batch.size()));
  return grad;
}

namespace {

LinearProbe effective_probe(const Matrix& base, const Matrix& delta, std::span<const ClassId> class_ids) {
  if (base.rows() != delta.rows() || base.cols() != delta.cols()) throw DataError("residual shape mismatch");
  LinearProbe p;
  p.weights = base;
  simd::axpy(1.0, delta.values(), p.weights.values());
  p.bias = constrain_bias(p.weights);
  p.class_ids.assign(class_ids.begin(), class_ids.end());
  p.constrained = true;
  return p;
}

}  // namespace

double residual_loss(const Matrix& base, const Matrix& delta, std::span<const ClassId> class_ids,
                     const FeatureDataset& batch, double beta) {
  const auto probe = effective_probe(base, delta, class_ids);
  const auto d = delta.values();
  return cross_entropy_loss(probe, batch) + beta * simd::dot(d, d);
}

Matrix residual_gradient(const Matrix& base, const Matrix& delta, std::span<const ClassId> class_ids,
                         const FeatureDataset& batch, double beta) {
  const auto probe = effective_probe(base, delta, class_ids);
  Matrix grad = cross_entropy_gradient(probe, batch, GradientMode::coupled);
  simd::axpy(2.0 * beta, delta.values(), grad.values());
  return grad;
}

LinearProbe train_probe(const FeatureDataset& data, const ProbeConfig& cfg, std::optional<std::span<const Center>> init) {
  cfg.validate();
  data.validate();
  const auto classes = data.classes();
  if (classes.size() < 2) {
    throw DataError("train_probe needs at least 2 classes, got " + std::to_string(classes.size()));
  }

  LinearProbe probe;
  probe.class_ids = classes;
  probe.weights = Matrix(classes.size(), data.n_dims);
  if (init) {
    if (center_classes(*init) != classes) throw DataError("train_probe: initial centers do not match data classes");
    for (std::size_t k = 0; k < classes.size(); ++k) {
      const auto& v = (*init)[k].vector;
      if (v.size() != data.n_dims) throw DataError("train_probe: initial center dimension mismatch");
      for (std::size_t d = 0; d < v.size(); ++d) probe.weights(k, d) = 2.0 * v[d];
    }
  }
  run_sgd(probe.weights, nullptr, nullptr, probe.class_ids, data, cfg);
  probe.bias = constrain_bias(probe.weights);
  probe.constrained = true;
  return probe;
}

std::vector<Center> train_residual_probe(std::span<const Center> prototypes, const FeatureDataset& data,
                                         const ProbeConfig& cfg) {
  cfg.validate();
  data.validate();
  const auto classes = data.classes();
  auto proto_classes = center_classes(prototypes);
  std::vector<std::size_t> order = all_indices(prototypes.size());
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return proto_classes[a] < proto_classes[b]; });
  std::vector<ClassId> sorted_ids;
  for (std::size_t i : order) sorted_ids.push_back(proto_classes[i]);
  if (sorted_ids != classes) {
    throw DataError("train_residual_probe: prototypes cover " + std::to_string(sorted_ids.size()) +
                    " classes, data has " + std::to_string(classes.size()) + " (or the class ids differ)");
  }

  Matrix base(classes.size(), data.n_dims);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& v = prototypes[order[k]].vector;
    if (v.size() != data.n_dims) throw DataError("train_residual_probe: prototype dimension mismatch");
    for (std::size_t d = 0; d < v.size(); ++d) base(k, d) = 2.0 * v[d];
  }
  Matrix delta(base.rows(), base.cols());
  Matrix weights = base;
  if (classes.size() >= 2) {
    run_sgd(weights, &base, &delta, classes, data, cfg);
  }

  std::vector<Center> out(prototypes.begin(), prototypes.end());
  for (std::size_t k = 0; k < order.size(); ++k) {
    Center& c = out[order[k]];
    for (std::size_t d = 0; d < data.n_dims; ++d) c.vector[d] = 0.5 * (base(k, d) + delta(k, d));
    c.weight = 0.0;
    c.kind = CenterKind::residual;
  }
  return out;
}

double nearest_center_accuracy(std::span<const Center> centers, const FeatureDataset& data) {
  if (data.size() == 0) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (centers[assign_cell(data.row(i), centers)].class_id == data.labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace ivoro
