// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "bytes.hpp"
#include "ivoro/error.hpp"
#include "ivoro/incremental.hpp"

namespace ivoro {

namespace {

void put_centers(detail::ByteWriter& w, const std::vector<Center>& centers) {
  for (const auto& c : centers) {
    for (double v : c.vector) w.put<float>(static_cast<float>(v));
  }
}

std::vector<Center> get_centers(detail::ByteReader& r, const PhaseClique& clique, std::size_t dim, CenterKind kind) {
  std::vector<Center> out(clique.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k].vector.resize(dim);
    for (double& v : out[k].vector) v = static_cast<double>(r.get<float>("center rows"));
    out[k].class_id = clique.class_ids[k];
    out[k].phase_id = clique.phase_id;
    out[k].kind = kind;
  }
  return out;
}

void write_clique(detail::ByteWriter& w, const PhaseClique& clique) {
  w.put<std::int32_t>(clique.phase_id);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(clique.size()));
  for (ClassId id : clique.class_ids) w.put<std::uint32_t>(id);
  std::uint8_t present = 0;
  if (clique.probing_centers) present |= 1;
  if (clique.residual_centers) present |= 2;
  w.put<std::uint8_t>(present);
  put_centers(w, clique.prototypes);
  if (clique.probing_centers) put_centers(w, *clique.probing_centers);
  if (clique.residual_centers) put_centers(w, *clique.residual_centers);
}

}  // namespace

std::vector<std::uint8_t> serialize_clique(const PhaseClique& clique) {
  detail::ByteWriter w;
  write_clique(w, clique);
  return w.take();
}

std::vector<std::uint8_t> serialize_model(const IncrementalModel& model) {
  detail::ByteWriter w;
  w.put_tag("IVMD");
  w.put<std::uint16_t>(kIvmdVersion);
  std::uint8_t mode = 0;
  if (model.mode().use_dnc) mode |= 1;
  if (model.mode().use_residual) mode |= 2;
  if (model.mode().rule == QueryRule::tournament) mode |= 4;
  w.put<std::uint8_t>(mode);
  const auto& t = model.transform();
  std::uint8_t tflags = 0;
  if (t.enabled) tflags |= 1;
  if (t.negative_policy == NegativePolicy::clamp) tflags |= 2;
  w.put<std::uint8_t>(tflags);
  w.put<double>(t.scale);
  w.put<double>(t.shift);
  w.put<double>(t.lambda);
  w.put<double>(t.epsilon);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.dim()));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.num_cliques()));
  for (const auto& clique : model.cliques()) write_clique(w, *clique);
  return w.take();
}

IncrementalModel deserialize_model(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect_tag("IVMD", "IVMD");
  const std::size_t version_at = r.position();
  const auto version = r.get<std::uint16_t>("version");
  if (version != kIvmdVersion) throw FormatError(version_at, "unsupported IVMD version " + std::to_string(version));
  const std::size_t mode_at = r.position();
  const auto mode_bits = r.get<std::uint8_t>("mode flags");
  if ((mode_bits & ~std::uint8_t{7}) != 0) throw FormatError(mode_at, "unknown IVMD mode bits");
  const std::size_t tflags_at = r.position();
  const auto tflags = r.get<std::uint8_t>("transform flags");
  if ((tflags & ~std::uint8_t{3}) != 0) throw FormatError(tflags_at, "unknown IVMD transform bits");

  ModelMode mode;
  mode.use_dnc = (mode_bits & 1) != 0;
  mode.use_residual = (mode_bits & 2) != 0;
  mode.rule = (mode_bits & 4) != 0 ? QueryRule::tournament : QueryRule::two_stage;
  TransformParams t;
  t.enabled = (tflags & 1) != 0;
  t.negative_policy = (tflags & 2) != 0 ? NegativePolicy::clamp : NegativePolicy::reject;
  t.scale = r.get<double>("transform");
  t.shift = r.get<double>("transform");
  t.lambda = r.get<double>("transform");
  t.epsilon = r.get<double>("transform");
  const auto dim = r.get<std::uint32_t>("dim");
  const auto n_cliques = r.get<std::uint32_t>("clique count");

  IncrementalModel model;
  try {
    model = IncrementalModel(dim, mode, t);
  } catch (const ConfigError& e) {
    throw FormatError(tflags_at, std::string("invalid transform parameters: ") + e.what());
  }
  for (std::uint32_t i = 0; i < n_cliques; ++i) {
    const std::size_t clique_at = r.position();
    PhaseClique clique;
    clique.phase_id = r.get<std::int32_t>("phase id");
    const auto K = r.get<std::uint32_t>("class count");
    r.require(static_cast<std::size_t>(K) * 4, "class ids");
    clique.class_ids.resize(K);
    for (auto& id : clique.class_ids) id = r.get<std::uint32_t>("class ids");
    const std::size_t present_at = r.position();
    const auto present = r.get<std::uint8_t>("center presence");
    if ((present & ~std::uint8_t{3}) != 0) throw FormatError(present_at, "unknown clique presence bits");
    const std::size_t lists = 1 + ((present & 1) ? 1 : 0) + ((present & 2) ? 1 : 0);
    r.require(lists * K * static_cast<std::size_t>(dim) * 4, "center rows");
    clique.prototypes = get_centers(r, clique, dim, CenterKind::prototype);
    if (present & 1) clique.probing_centers = get_centers(r, clique, dim, CenterKind::probing);
    if (present & 2) clique.residual_centers = get_centers(r, clique, dim, CenterKind::residual);
    try {
      model = model.with_clique(std::move(clique));
    } catch (const DataError& e) {
      throw FormatError(clique_at, std::string("invalid clique: ") + e.what());
    }
  }
  if (r.remaining() != 0) throw FormatError(r.position(), "trailing bytes after IVMD payload");
  return model;
}

void save_model(const IncrementalModel& model, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_model(model));
}

IncrementalModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file_bytes(path)); }

}  // namespace ivoro
