// SPDX-License-Identifier: Apache-2.0
#include "ivoro/incremental.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "ivoro/error.hpp"

namespace ivoro {

const std::vector<Center>* PhaseClique::centers(CenterKind kind) const {
  switch (kind) {
    case CenterKind::prototype: return &prototypes;
    case CenterKind::probing: return probing_centers ? &*probing_centers : nullptr;
    case CenterKind::residual: return residual_centers ? &*residual_centers : nullptr;
  }
  return nullptr;
}

IncrementalModel::IncrementalModel(std::size_t dim, ModelMode mode, TransformParams transform)
    : dim_(dim), mode_(mode), transform_(transform) {
  transform_.validate();
}

std::size_t IncrementalModel::num_classes() const {
  std::size_t n = 0;
  for (const auto& c : cliques_) n += c->size();
  return n;
}

std::vector<ClassId> IncrementalModel::class_ids() const {
  std::vector<ClassId> ids;
  for (const auto& c : cliques_) ids.insert(ids.end(), c->class_ids.begin(), c->class_ids.end());
  return ids;
}

IncrementalModel IncrementalModel::with_clique(PhaseClique clique) const {
  const std::size_t K = clique.size();
  if (K == 0) throw DataError("clique has no classes");
  auto check_list = [&](const std::vector<Center>& list, const char* what) {
    if (list.size() != K) {
      throw DataError(std::string("clique ") + what + " list has " + std::to_string(list.size()) + " entries, expected " +
                      std::to_string(K));
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (list[k].class_id != clique.class_ids[k]) throw DataError(std::string("clique ") + what + " list is misaligned");
      if (list[k].vector.size() != clique.prototypes.front().vector.size()) {
        throw DataError(std::string("clique ") + what + " centers have inconsistent dimension");
      }
    }
  };
  check_list(clique.prototypes, "prototype");
  if (clique.probing_centers) check_list(*clique.probing_centers, "probing");
  if (clique.residual_centers) check_list(*clique.residual_centers, "residual");

  const std::size_t clique_dim = clique.prototypes.front().vector.size();
  IncrementalModel next = *this;
  if (next.dim_ == 0 && next.cliques_.empty()) next.dim_ = clique_dim;
  if (clique_dim != next.dim_) {
    throw DataError("dimension mismatch: model has " + std::to_string(next.dim_) + " dims, phase data has " +
                    std::to_string(clique_dim));
  }
  const auto existing = class_ids();
  const std::set<ClassId> taken(existing.begin(), existing.end());
  for (ClassId id : clique.class_ids) {
    if (taken.contains(id)) {
      throw DataError("class " + std::to_string(id) + " was already introduced in an earlier phase");
    }
  }
  next.cliques_.push_back(std::make_shared<const PhaseClique>(std::move(clique)));
  return next;
}

IncrementalModel IncrementalModel::with_mode(ModelMode mode) const {
  IncrementalModel next = *this;
  next.mode_ = mode;
  return next;
}

const std::vector<Center>& IncrementalModel::within_centers(const PhaseClique& c) const {
  if (mode_.use_dnc && c.probing_centers) return *c.probing_centers;
  if (!mode_.use_dnc && mode_.use_residual && c.residual_centers) return *c.residual_centers;
  if (mode_.use_dnc || mode_.use_residual) {
    throw DataError("clique " + std::to_string(c.phase_id) + " lacks the centers required by the model mode");
  }
  return c.prototypes;
}

const std::vector<Center>& IncrementalModel::cross_centers(const PhaseClique& c) const {
  if (mode_.use_residual) {
    if (!c.residual_centers) {
      throw DataError("clique " + std::to_string(c.phase_id) + " has no residual centers");
    }
    return *c.residual_centers;
  }
  return c.prototypes;
}

std::vector<Center> compute_prototypes(const FeatureDataset& data, PhaseId phase_id) {
  data.validate();
  if (data.size() == 0) throw DataError("compute_prototypes: no samples");
  std::map<ClassId, std::pair<std::vector<double>, std::size_t>> sums;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto& [sum, count] = sums[data.labels[i]];
    if (sum.empty()) sum.assign(data.n_dims, 0.0);
    const auto row = data.row(i);
    for (std::size_t d = 0; d < data.n_dims; ++d) sum[d] += row[d];
    ++count;
  }
  std::vector<Center> out;
  out.reserve(sums.size());
  for (auto& [label, entry] : sums) {
    auto& [sum, count] = entry;
    Center c;
    c.vector = std::move(sum);
    for (double& v : c.vector) v /= static_cast<double>(count);
    c.class_id = label;
    c.phase_id = phase_id;
    c.kind = CenterKind::prototype;
    out.push_back(std::move(c));
  }
  return out;
}

IncrementalModel add_phase(const IncrementalModel& model, const FeatureDataset& data, const ProbeConfig& cfg) {
  if (data.size() == 0) throw DataError("add_phase: phase has no samples");
  if (model.dim() != 0 && data.n_dims != model.dim()) {
    throw DataError("dimension mismatch: model has " + std::to_string(model.dim()) + " dims, phase data has " +
                    std::to_string(data.n_dims));
  }
  const auto existing = model.class_ids();
  const std::set<ClassId> taken(existing.begin(), existing.end());
  for (ClassId id : data.classes()) {
    if (taken.contains(id)) {
      throw DataError("class " + std::to_string(id) + " was already introduced in an earlier phase");
    }
  }

  const auto phase_id = static_cast<PhaseId>(model.num_cliques());
  PhaseClique clique;
  clique.phase_id = phase_id;
  clique.class_ids = data.classes();
  clique.prototypes = compute_prototypes(data, phase_id);

  ProbeConfig phase_cfg = cfg;
  phase_cfg.seed = cfg.seed + static_cast<std::uint64_t>(phase_id);

  if (model.mode().use_dnc) {
    std::vector<Center> probing;
    if (clique.size() >= 2) {
      const auto probe = train_probe(data, phase_cfg, std::span<const Center>(clique.prototypes));
      probing = reduce_to_vd(probe);
    } else {
      probing = clique.prototypes;  // a lone class has no within-clique boundary
    }
    for (auto& c : probing) {
      c.phase_id = phase_id;
      c.kind = CenterKind::probing;
    }
    clique.probing_centers = std::move(probing);
  }
  if (model.mode().use_residual) {
    clique.residual_centers = train_residual_probe(clique.prototypes, data, phase_cfg);
  }
  return model.with_clique(std::move(clique));
}

namespace {

ClassId predict_two_stage(const IncrementalModel& model, std::span<const double> z) {
  std::vector<Center> finalists;
  std::vector<ClassId> finalist_ids;
  finalists.reserve(model.num_cliques());
  for (const auto& clique : model.cliques()) {
    const std::size_t w = assign_cell(z, model.within_centers(*clique));
    finalists.push_back(model.cross_centers(*clique)[w]);
    finalist_ids.push_back(clique->class_ids[w]);
  }
  if (finalists.size() == 1) return finalist_ids.front();
  return finalist_ids[assign_cell(z, finalists)];
}

// True when z lies strictly on b's side of the bisector between a and b.
bool second_wins(const Center& a, const Center& b, std::span<const double> z) {
  if (a.vector == b.vector) return false;
  return bisector(a, b).evaluate(z) < 0.0;
}

ClassId predict_tournament(const IncrementalModel& model, std::span<const double> z) {
  std::size_t cur_clique = 0, cur_index = 0;
  for (std::size_t t = 0; t < model.num_cliques(); ++t) {
    const auto& clique = model.clique(t);
    for (std::size_t k = 0; k < clique.size(); ++k) {
      if (t == 0 && k == 0) continue;
      const auto& holder = model.clique(cur_clique);
      const bool same = cur_clique == t;
      const Center& a = same ? model.within_centers(holder)[cur_index] : model.cross_centers(holder)[cur_index];
      const Center& b = same ? model.within_centers(clique)[k] : model.cross_centers(clique)[k];
      if (second_wins(a, b, z)) {
        cur_clique = t;
        cur_index = k;
      }
    }
  }
  return model.clique(cur_clique).class_ids[cur_index];
}

}  // namespace

ClassId predict(const IncrementalModel& model, std::span<const double> z) {
  if (model.num_cliques() == 0) throw DataError("predict: model has no phases");
  if (z.size() != model.dim()) {
    throw DataError("dimension mismatch: query has " + std::to_string(z.size()) + " dims, model has " +
                    std::to_string(model.dim()));
  }
  return model.mode().rule == QueryRule::tournament ? predict_tournament(model, z) : predict_two_stage(model, z);
}

ClassId predict_oracle(const IncrementalModel& model, std::span<const double> z, CenterKind kind) {
  if (model.num_cliques() == 0) throw DataError("predict_oracle: model has no phases");
  std::vector<Center> all;
  for (const auto& clique : model.cliques()) {
    const auto* list = clique->centers(kind);
    if (list == nullptr) {
      throw DataError("clique " + std::to_string(clique->phase_id) + " has no " + std::string(to_string(kind)) +
                      " centers");
    }
    all.insert(all.end(), list->begin(), list->end());
  }
  return all[assign_cell(z, all)].class_id;
}

const Center* find_cross_center(const IncrementalModel& model, ClassId id) {
  for (const auto& clique : model.cliques()) {
    const auto it = std::find(clique->class_ids.begin(), clique->class_ids.end(), id);
    if (it != clique->class_ids.end()) {
      return &model.cross_centers(*clique)[static_cast<std::size_t>(it - clique->class_ids.begin())];
    }
  }
  return nullptr;
}

}  // namespace ivoro
