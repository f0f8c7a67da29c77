// SPDX-License-Identifier: Apache-2.0
#include "ivoro/civd.hpp"

#include <cmath>
#include <string>

#include "ivoro/error.hpp"
#include "ivoro/simd/kernels.hpp"

namespace ivoro {

void LayeredModel::validate() const {
  if (layer_count < 1) throw ConfigError("layered model needs at least one layer");
  if (gamma == 0.0 || !std::isfinite(gamma)) throw ConfigError("influence exponent gamma must be finite and nonzero");
  if (!transforms.empty() && transforms.size() != layer_count) {
    throw ConfigError("layered model has " + std::to_string(transforms.size()) + " transforms for " +
                      std::to_string(layer_count) + " layers");
  }
  for (const auto& c : clusters) {
    if (c.members.size() != layer_count) {
      throw DataError("cluster for class " + std::to_string(c.class_id) + " has " + std::to_string(c.members.size()) +
                      " members, expected " + std::to_string(layer_count));
    }
    for (std::size_t l = 0; l < layer_count; ++l) {
      if (c.members[l].vector.size() != clusters.front().members[l].vector.size()) {
        throw DataError("layer " + std::to_string(l) + " dimensionality differs across clusters");
      }
    }
  }
}

namespace {

double signed_distance_sum(const CenterCluster& cluster, QueryCluster query, double gamma) {
  if (query.size() != cluster.members.size()) {
    throw DataError("query has " + std::to_string(query.size()) + " layers, cluster has " +
                    std::to_string(cluster.members.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < query.size(); ++i) {
    const auto& c = cluster.members[i].vector;
    if (c.size() != query[i].size()) {
      throw DataError("dimension mismatch at layer " + std::to_string(i) + ": query " + std::to_string(query[i].size()) +
                      ", center " + std::to_string(c.size()));
    }
    const double d = simd::squared_l2(query[i], c);
    if (gamma < 0.0 && d == 0.0) {
      throw DataError("influence singular: zero distance at layer " + std::to_string(i) + " with negative gamma");
    }
    total += gamma == 1.0 ? d : std::pow(d, gamma);
  }
  return gamma > 0.0 ? total : -total;
}

}  // namespace

double influence(const CenterCluster& cluster, QueryCluster query, double gamma) {
  if (gamma == 0.0) throw ConfigError("influence exponent gamma must be nonzero");
  return -signed_distance_sum(cluster, query, gamma);
}

std::vector<double> layered_distances(const LayeredModel& model, QueryCluster query) {
  model.validate();
  std::vector<double> out(model.clusters.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = signed_distance_sum(model.clusters[k], query, model.gamma);
  return out;
}

ClassId assign_ccvd(const LayeredModel& model, QueryCluster query) {
  if (model.clusters.empty()) throw DataError("assign_ccvd: model has no clusters");
  const auto dist = layered_distances(model, query);
  std::size_t best = 0;
  for (std::size_t k = 1; k < dist.size(); ++k) {
    const double f = -dist[k], best_f = -dist[best];
    if (f > best_f || (f == best_f && model.clusters[k].class_id < model.clusters[best].class_id)) best = k;
  }
  return model.clusters[best].class_id;
}

LayeredModel make_layered_model(std::span<const IncrementalModel> layers, double gamma) {
  if (layers.empty()) throw ConfigError("make_layered_model: no layers");
  LayeredModel out;
  out.layer_count = layers.size();
  out.gamma = gamma;
  for (const auto& layer : layers) out.transforms.push_back(layer.transform());
  for (const auto& clique : layers.front().cliques()) {
    for (ClassId id : clique->class_ids) {
      CenterCluster cluster;
      cluster.class_id = id;
      cluster.phase_id = clique->phase_id;
      for (std::size_t l = 0; l < layers.size(); ++l) {
        const Center* c = find_cross_center(layers[l], id);
        if (c == nullptr) throw DataError("class " + std::to_string(id) + " missing from layer " + std::to_string(l));
        cluster.members.push_back(*c);
      }
      out.clusters.push_back(std::move(cluster));
    }
  }
  out.validate();
  return out;
}

}  // namespace ivoro
