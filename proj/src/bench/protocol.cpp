// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <map>
#include <string>

#include "ivoro/bench.hpp"
#include "ivoro/civd.hpp"
#include "ivoro/error.hpp"
#include "ivoro/simd/kernels.hpp"

namespace ivoro {

ProtocolInputs load_inputs(const PhaseManifest& manifest) {
  manifest.validate();
  ProtocolInputs in;
  in.manifest = manifest;
  for (const auto& layer : manifest.layers) {
    in.train.push_back(read_features(layer.train));
    in.test.push_back(read_features(layer.test));
  }
  return in;
}

namespace {

struct TestSample {
  ClassId label = 0;
  std::size_t phase = 0;
  std::size_t first_row = 0;  // rows first_row .. first_row + 3 when augmented
};

struct LayerData {
  std::vector<FeatureDataset> phase_train;  // transformed, labels expanded when augmented
  FeatureDataset test;                      // transformed, original labels
};

FeatureDataset transform_rows(const FeatureDataset& ds, const TransformParams& t, bool expand_labels) {
  FeatureDataset out;
  out.n_dims = ds.n_dims;
  out.labels.reserve(ds.size());
  out.features.reserve(ds.features.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto z = compose(ds.row(i), t);
    out.features.insert(out.features.end(), z.begin(), z.end());
    out.labels.push_back(expand_labels ? AugmentedLabelMap::expand(ds.labels[i], ds.rotations[i]) : ds.labels[i]);
  }
  out.rotations = ds.rotations;
  return out;
}

void check_inputs(const ProtocolInputs& in, std::size_t layers_used, bool augmented_data) {
  if (in.train.size() < layers_used || in.test.size() < layers_used) {
    throw DataError("protocol inputs provide fewer layers than the manifest requires");
  }
  for (std::size_t l = 0; l < layers_used; ++l) {
    in.train[l].validate();
    in.test[l].validate();
    if (in.train[l].n_dims != in.test[l].n_dims) {
      throw DataError("layer " + std::to_string(l) + ": train and test dimensionality differ");
    }
    if (in.test[l].labels != in.test[0].labels) {
      throw DataError("layer " + std::to_string(l) + ": test rows are not aligned with layer 0");
    }
    if (augmented_data) {
      for (const auto* ds : {&in.train[l], &in.test[l]}) {
        if (!ds->has_rotations()) throw DataError("augmented manifest but feature file has no rotation tags");
      }
    }
  }
  if (augmented_data) {
    const auto& t = in.test[0];
    if (t.size() % 4 != 0) throw DataError("augmented test set row count is not a multiple of 4");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t.rotations[i] != i % 4 || t.labels[i] != t.labels[i - i % 4]) {
        throw DataError("augmented test rows must be grouped per sample with rotation tags 0,1,2,3 (row " +
                        std::to_string(i) + ")");
      }
    }
  }
}

class Evaluator {
 public:
  Evaluator(const RunConfig& cfg, const std::vector<IncrementalModel>& models, const std::vector<LayerData>& layers,
            bool augmented_data)
      : cfg_(cfg), models_(models), layers_(layers), augmented_data_(augmented_data) {
    if (cfg.mode.layered) layered_ = make_layered_model(models, cfg.gamma);
    if (cfg.mode.augmented()) prepare_tensor_index();
  }

  ClassId decode(ClassId id) const { return augmented_data_ ? AugmentedLabelMap::base(id) : id; }

  // Nearest-center style rule on the unrotated query.
  ClassId baseline(const TestSample& s) const {
    if (cfg_.mode.layered) return decode(assign_ccvd(layered_, query_cluster(s.first_row)));
    return decode(predict(models_[0], layers_[0].test.row(s.first_row)));
  }

  DistanceTensor tensor(const TestSample& s) const {
    DistanceTensor t(classes_.size());
    for (std::size_t a = 0; a < kRotations; ++a) {
      const auto dist = distances(s.first_row + a);
      for (std::size_t b = 0; b < kRotations; ++b) {
        for (std::size_t k = 0; k < classes_.size(); ++k) t.at(a, b, k) = dist[slot_[k][b]];
      }
    }
    return t;
  }

  ClassId augmented(const DistanceTensor& t) const {
    const PairSet pairs = cfg_.diagonal_augmentation ? PairSet::diagonal : PairSet::full;
    return classes_[cfg_.mode.consensus ? consensus(t, pairs) : integrate(t, pairs)];
  }

  ClassId predict_sample(const TestSample& s) const {
    return cfg_.mode.augmented() ? augmented(tensor(s)) : baseline(s);
  }

 private:
  std::vector<FeatureVector> query_cluster(std::size_t row) const {
    std::vector<FeatureVector> q;
    for (const auto& layer : layers_) {
      const auto r = layer.test.row(row);
      q.emplace_back(r.begin(), r.end());
    }
    return q;
  }

  // Distance from one test row to every expanded class, in `centers_` order.
  std::vector<double> distances(std::size_t row) const {
    if (cfg_.mode.layered) return layered_distances(layered_, query_cluster(row));
    const auto z = layers_[0].test.row(row);
    std::vector<double> out(centers_.size());
    for (std::size_t i = 0; i < centers_.size(); ++i) out[i] = simd::squared_l2(z, centers_[i]->vector);
    return out;
  }

  void prepare_tensor_index() {
    std::map<ClassId, std::size_t> position;  // expanded id -> index into the distance list
    if (cfg_.mode.layered) {
      for (std::size_t i = 0; i < layered_.clusters.size(); ++i) position[layered_.clusters[i].class_id] = i;
    } else {
      for (const auto& clique : models_[0].cliques()) {
        const auto& list = models_[0].cross_centers(*clique);
        for (const auto& c : list) {
          position[c.class_id] = centers_.size();
          centers_.push_back(&c);
        }
      }
    }
    std::map<ClassId, std::array<std::size_t, kRotations>> by_base;
    std::map<ClassId, int> seen;
    for (const auto& [expanded, idx] : position) {
      by_base[AugmentedLabelMap::base(expanded)][AugmentedLabelMap::rotation(expanded)] = idx;
      ++seen[AugmentedLabelMap::base(expanded)];
    }
    for (const auto& [base, slots] : by_base) {
      if (seen[base] != static_cast<int>(kRotations)) {
        throw DataError("class " + std::to_string(base) + " lacks some rotation variants in the training data");
      }
      classes_.push_back(base);
      slot_.push_back(slots);
    }
  }

  const RunConfig& cfg_;
  const std::vector<IncrementalModel>& models_;
  const std::vector<LayerData>& layers_;
  bool augmented_data_;
  LayeredModel layered_;
  std::vector<const Center*> centers_;
  std::vector<ClassId> classes_;
  std::vector<std::array<std::size_t, kRotations>> slot_;
};

}  // namespace

EvalReport run_protocol(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.manifest.empty()) throw ConfigError("run config names no manifest");
  const auto manifest = load_manifest(cfg.manifest);
  cfg.validate(&manifest);
  return run_protocol(cfg, load_inputs(manifest));
}

EvalReport run_protocol(const RunConfig& cfg, const ProtocolInputs& inputs) {
  const auto& manifest = inputs.manifest;
  cfg.validate(&manifest);
  const bool augmented_data = manifest.augmentations == 4;
  const std::size_t layers_used = cfg.mode.layered ? manifest.layers.size() : 1;
  check_inputs(inputs, layers_used, augmented_data);

  std::map<ClassId, std::size_t> phase_of;
  for (std::size_t t = 0; t < manifest.phases.size(); ++t) {
    for (ClassId c : manifest.phases[t]) phase_of[c] = t;
  }

  const TransformParams transform = cfg.effective_transform();
  std::vector<LayerData> layers(layers_used);
  for (std::size_t l = 0; l < layers_used; ++l) {
    const auto train = transform_rows(inputs.train[l], transform, augmented_data);
    layers[l].test = transform_rows(inputs.test[l], transform, false);
    for (const auto& phase : manifest.phases) {
      std::vector<ClassId> wanted;
      for (ClassId c : phase) {
        if (augmented_data) {
          for (std::uint8_t a = 0; a < kRotations; ++a) wanted.push_back(AugmentedLabelMap::expand(c, a));
        } else {
          wanted.push_back(c);
        }
      }
      layers[l].phase_train.push_back(select_classes(train, wanted));
    }
    for (ClassId label : inputs.train[l].labels) {
      if (!phase_of.contains(label)) {
        throw DataError("training class " + std::to_string(label) + " is not assigned to any phase");
      }
    }
  }

  std::vector<TestSample> samples;
  const std::size_t stride = augmented_data ? 4 : 1;
  for (std::size_t i = 0; i < layers[0].test.size(); i += stride) {
    const ClassId label = layers[0].test.labels[i];
    const auto it = phase_of.find(label);
    if (it == phase_of.end()) throw DataError("test class " + std::to_string(label) + " is not assigned to any phase");
    samples.push_back({label, it->second, i});
  }

  ProbeConfig probe = cfg.probe;
  probe.seed = cfg.seed;
  const ModelMode model_mode{cfg.mode.dnc, cfg.mode.residual, cfg.query_rule};
  std::vector<IncrementalModel> models;
  for (std::size_t l = 0; l < layers_used; ++l) models.emplace_back(layers[l].test.n_dims, model_mode, transform);

  EvalReport report;
  report.mode = cfg.mode.to_string();
  report.phases = manifest.phases;
  const std::size_t T = manifest.phases.size();
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < layers_used; ++l) {
      if (layers[l].phase_train[t].size() == 0) {
        throw DataError("phase " + std::to_string(t) + " has no training samples");
      }
      models[l] = add_phase(models[l], layers[l].phase_train[t], probe);
    }
    const Evaluator eval(cfg, models, layers, augmented_data);
    std::vector<std::vector<LabeledPrediction>> per_task(t + 1);
    std::vector<LabeledPrediction> all;
    for (const auto& s : samples) {
      if (s.phase > t) continue;
      const LabeledPrediction p{s.label, eval.predict_sample(s)};
      per_task[s.phase].push_back(p);
      all.push_back(p);
    }
    std::vector<double> row;
    for (const auto& task : per_task) row.push_back(accuracy_percent(task));
    report.accuracy_matrix.push_back(std::move(row));
    report.phase_accuracy.push_back(accuracy_percent(all));
    report.predictions.push_back(std::move(all));

    if (t + 1 == T && cfg.mode.augmented()) {
      const PairSet pairs = cfg.diagonal_augmentation ? PairSet::diagonal : PairSet::full;
      struct Acc { double hv = 0; std::size_t n = 0, base_hits = 0, aug_hits = 0; };
      std::map<ClassId, Acc> per_class;
      for (const auto& s : samples) {
        const auto tensor = eval.tensor(s);
        auto& a = per_class[s.label];
        a.hv += hv(tensor, pairs);
        ++a.n;
        if (eval.baseline(s) == s.label) ++a.base_hits;
        if (eval.augmented(tensor) == s.label) ++a.aug_hits;
      }
      std::vector<double> hvs, deltas;
      for (const auto& [id, a] : per_class) {
        ClassUncertainty u;
        u.class_id = id;
        u.mean_hv = a.hv / static_cast<double>(a.n);
        u.baseline_accuracy = 100.0 * static_cast<double>(a.base_hits) / static_cast<double>(a.n);
        u.augmented_accuracy = 100.0 * static_cast<double>(a.aug_hits) / static_cast<double>(a.n);
        hvs.push_back(u.mean_hv);
        deltas.push_back(u.delta_accuracy());
        report.class_uncertainty.push_back(u);
      }
      try {
        report.hv_delta_pearson = pearson(hvs, deltas);
      } catch (const DataError&) {
        report.hv_delta_pearson.reset();  // fewer than 2 classes or no variation
      }
    }
  }

  double running = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    running += report.phase_accuracy[t];
    report.avg_accuracy.push_back(running / static_cast<double>(t + 1));
    report.avg_forgetting.push_back(avg_forgetting(report.accuracy_matrix, t));
  }
  report.last_accuracy = report.phase_accuracy.back();

  if (!cfg.output_dir.empty()) {
    emit_report(report, cfg.output_dir);
    for (std::size_t l = 0; l < layers_used; ++l) {
      save_model(models[l], cfg.output_dir / ("model_" + manifest.layers[l].name + ".ivmd"));
    }
  }
  return report;
}

}  // namespace ivoro
