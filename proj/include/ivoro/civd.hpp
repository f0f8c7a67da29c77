// SPDX-License-Identifier: Apache-2.0
#pragma once

// Cluster-to-cluster Voronoi diagrams: each class owns one center per
// network layer and a query brings one feature per layer. Cells are the
// argmax of F(C_k, C(z)) = -sign(gamma) * sum_i d_i^gamma, with d_i the
// squared distance at layer i.

#include <span>
#include <vector>

#include "ivoro/incremental.hpp"
#include "ivoro/transforms.hpp"
#include "ivoro/types.hpp"

namespace ivoro {

struct CenterCluster {
  std::vector<Center> members;  // one per layer, fixed layer order
  ClassId class_id = 0;
  PhaseId phase_id = 0;
};

struct LayeredModel {
  std::size_t layer_count = 1;
  std::vector<CenterCluster> clusters;
  double gamma = 1.0;
  std::vector<TransformParams> transforms;  // per layer; may be empty

  /// Throws DataError / ConfigError on inconsistent layout.
  void validate() const;
};

using QueryCluster = std::span<const FeatureVector>;

double influence(const CenterCluster& cluster, QueryCluster query, double gamma);

/// Class of the cluster with maximal influence; ties go to the lowest class id.
ClassId assign_ccvd(const LayeredModel& model, QueryCluster query);

/// sign(gamma) * sum_i d_i^gamma for every cluster, i.e. -F. Smaller is closer.
std::vector<double> layered_distances(const LayeredModel& model, QueryCluster query);

/// Clusters from per-layer incremental models that share class ids; each
/// layer contributes its cross-clique center for the class.
LayeredModel make_layered_model(std::span<const IncrementalModel> layers, double gamma);

}  // namespace ivoro
