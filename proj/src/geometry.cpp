// SPDX-License-Identifier: Apache-2.0
#include "ivoro/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ivoro/error.hpp"
#include "ivoro/simd/kernels.hpp"

namespace ivoro {

std::string_view to_string(CenterKind kind) {
  switch (kind) {
    case CenterKind::prototype: return "prototype";
    case CenterKind::probing: return "probing";
    case CenterKind::residual: return "residual";
  }
  return "unknown";
}

namespace {

void check_dims(std::size_t query, std::size_t center) {
  if (query != center) {
    throw DataError("dimension mismatch: query has " + std::to_string(query) +
                    " dims, center has " + std::to_string(center));
  }
}

}  // namespace

double Bisector::evaluate(std::span<const double> z) const {
  check_dims(z.size(), normal.size());
  return simd::dot(normal, z) - offset;
}

double power_score(std::span<const double> z, const Center& c) {
  check_dims(z.size(), c.vector.size());
  return simd::squared_l2(z, c.vector) - c.weight;
}

std::size_t assign_cell(std::span<const double> z, std::span<const Center> centers) {
  if (centers.empty()) throw DataError("assign_cell: empty center list");
  std::size_t best = 0;
  double best_score = power_score(z, centers[0]);
  for (std::size_t i = 1; i < centers.size(); ++i) {
    const double s = power_score(z, centers[i]);
    if (s < best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

Bisector bisector(const Center& c1, const Center& c2) {
  check_dims(c1.vector.size(), c2.vector.size());
  const std::size_t n = c1.vector.size();
  const double gap = std::sqrt(simd::squared_l2(c1.vector, c2.vector));
  if (!(gap > 0.0)) throw DataError("bisector: coincident centers");

  Bisector b;
  b.normal.resize(n);
  for (std::size_t i = 0; i < n; ++i) b.normal[i] = (c1.vector[i] - c2.vector[i]) / gap;
  const double n1 = simd::dot(c1.vector, c1.vector);
  const double n2 = simd::dot(c2.vector, c2.vector);
  b.offset = (n1 - n2) / (2.0 * gap);
  return b;
}

std::vector<double> constrain_bias(const Matrix& weights) {
  std::vector<double> bias(weights.rows());
  for (std::size_t k = 0; k < weights.rows(); ++k) {
    const auto row = weights.row(k);
    if (!std::all_of(row.begin(), row.end(), [](double v) { return std::isfinite(v); })) {
      throw DataError("constrain_bias: non-finite weight in row " + std::to_string(k));
    }
    bias[k] = -0.25 * simd::dot(row, row);
  }
  return bias;
}

double bias_constraint_violation(const LinearProbe& probe) {
  if (probe.bias.size() != probe.num_classes()) {
    throw DataError("linear probe has " + std::to_string(probe.num_classes()) + " weight rows but " +
                    std::to_string(probe.bias.size()) + " biases");
  }
  const auto target = constrain_bias(probe.weights);
  double worst = 0.0;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double scale = std::max(std::abs(target[k]), 1.0);
    worst = std::max(worst, std::abs(probe.bias[k] - target[k]) / scale);
  }
  return worst;
}

std::vector<Center> reduce_to_vd(const LinearProbe& probe) {
  const double violation = bias_constraint_violation(probe);
  if (!probe.constrained || violation > kBiasConstraintTolerance) {
    throw DataError("reduce_to_vd: probe is not Voronoi-constrained (max relative bias violation " +
                    std::to_string(violation) + ", flag " + (probe.constrained ? "set" : "unset") + ")");
  }
  std::vector<Center> centers(probe.num_classes());
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const auto row = probe.weights.row(k);
    centers[k].vector.assign(row.begin(), row.end());
    for (double& v : centers[k].vector) v *= 0.5;
    centers[k].kind = CenterKind::probing;
    if (k < probe.class_ids.size()) centers[k].class_id = probe.class_ids[k];
  }
  return centers;
}

std::vector<double> probe_scores(const LinearProbe& probe, std::span<const double> z) {
  check_dims(z.size(), probe.dim());
  std::vector<double> scores(probe.num_classes());
  for (std::size_t k = 0; k < scores.size(); ++k) {
    scores[k] = simd::dot(probe.weights.row(k), z) + probe.bias[k];
  }
  return scores;
}

std::size_t probe_argmax(const LinearProbe& probe, std::span<const double> z) {
  const auto scores = probe_scores(probe, z);
  if (scores.empty()) throw DataError("probe_argmax: probe has no classes");
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

}  // namespace ivoro
