// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include "../bytes.hpp"
#include "ivoro/error.hpp"
#include "ivoro/ingestion.hpp"

namespace ivoro {

void FeatureDataset::push_back(ClassId label, std::span<const double> feature, std::optional<std::uint8_t> rotation) {
  if (labels.empty() && features.empty() && n_dims == 0) n_dims = feature.size();
  if (feature.size() != n_dims) {
    throw DataError("feature has " + std::to_string(feature.size()) + " dims, dataset has " + std::to_string(n_dims));
  }
  if (rotation.has_value() != has_rotations() && !labels.empty()) {
    throw DataError("rotation tags must be present on all rows or none");
  }
  labels.push_back(label);
  features.insert(features.end(), feature.begin(), feature.end());
  if (rotation) rotations.push_back(*rotation);
}

std::vector<ClassId> FeatureDataset::classes() const {
  std::set<ClassId> unique(labels.begin(), labels.end());
  return {unique.begin(), unique.end()};
}

void FeatureDataset::validate() const {
  if (features.size() != labels.size() * n_dims) {
    throw DataError("dataset holds " + std::to_string(features.size()) + " values, expected " +
                    std::to_string(labels.size()) + " x " + std::to_string(n_dims));
  }
  if (!rotations.empty()) {
    if (rotations.size() != labels.size()) throw DataError("rotation tag count does not match row count");
    for (std::size_t i = 0; i < rotations.size(); ++i) {
      if (rotations[i] > 3) throw DataError("rotation tag " + std::to_string(rotations[i]) + " at row " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i])) {
      throw DataError("non-finite feature value at row " + std::to_string(i / std::max<std::size_t>(n_dims, 1)));
    }
  }
}

std::vector<std::uint8_t> serialize_features(const FeatureDataset& ds) {
  ds.validate();
  detail::ByteWriter w;
  w.put_tag("IVFS");
  w.put<std::uint16_t>(kIvfsVersion);
  w.put<std::uint8_t>(kIvfsDtypeF32);
  w.put<std::uint8_t>(ds.has_rotations() ? 1 : 0);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(ds.n_dims));
  w.put<std::uint64_t>(ds.size());
  for (ClassId label : ds.labels) w.put<std::uint32_t>(label);
  if (ds.has_rotations()) w.put_bytes(ds.rotations);
  for (double v : ds.features) w.put<float>(static_cast<float>(v));
  return w.take();
}

IvfsHeader parse_ivfs_header(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.expect_tag("IVFS", "IVFS");
  IvfsHeader h;
  const std::size_t version_at = r.position();
  h.version = r.get<std::uint16_t>("version");
  if (h.version != kIvfsVersion) throw FormatError(version_at, "unsupported IVFS version " + std::to_string(h.version));
  const std::size_t dtype_at = r.position();
  h.dtype = r.get<std::uint8_t>("dtype");
  if (h.dtype != kIvfsDtypeF32) throw FormatError(dtype_at, "unsupported IVFS dtype " + std::to_string(h.dtype));
  const std::size_t flags_at = r.position();
  h.flags = r.get<std::uint8_t>("flags");
  if ((h.flags & ~std::uint8_t{1}) != 0) throw FormatError(flags_at, "unknown IVFS flag bits");
  h.n_dims = r.get<std::uint32_t>("n_dims");
  h.n_samples = r.get<std::uint64_t>("n_samples");
  return h;
}

FeatureDataset deserialize_features(std::span<const std::uint8_t> bytes) {
  const IvfsHeader h = parse_ivfs_header(bytes);
  detail::ByteReader r(bytes);
  r.skip(kIvfsHeaderSize, "header");

  const bool tagged = (h.flags & 1) != 0;
  // Guard against absurd sizes before allocating.
  const long double payload = static_cast<long double>(h.n_samples) * (4.0L + (tagged ? 1.0L : 0.0L) +
                                                                       4.0L * h.n_dims);
  if (payload > static_cast<long double>(r.remaining())) {
    throw FormatError(bytes.size(), "truncated IVFS payload: header declares " + std::to_string(h.n_samples) +
                                        " samples x " + std::to_string(h.n_dims) + " dims");
  }

  FeatureDataset ds;
  ds.n_dims = h.n_dims;
  ds.labels.resize(h.n_samples);
  for (auto& label : ds.labels) label = r.get<std::uint32_t>("labels");
  if (tagged) {
    ds.rotations.resize(h.n_samples);
    for (std::size_t i = 0; i < ds.rotations.size(); ++i) {
      const std::size_t at = r.position();
      ds.rotations[i] = r.get<std::uint8_t>("rotation tags");
      if (ds.rotations[i] > 3) throw FormatError(at, "rotation tag out of range");
    }
  }
  ds.features.resize(h.n_samples * h.n_dims);
  for (auto& v : ds.features) v = static_cast<double>(r.get<float>("features"));
  if (r.remaining() != 0) throw FormatError(r.position(), "trailing bytes after IVFS payload");
  return ds;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::runtime, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCategory::runtime, "write failed: " + path.string());
}

void write_features(const FeatureDataset& ds, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_features(ds));
}

FeatureDataset read_features(const std::filesystem::path& path) { return deserialize_features(read_file_bytes(path)); }

FeatureDataset select_classes(const FeatureDataset& ds, std::span<const ClassId> classes) {
  const std::set<ClassId> wanted(classes.begin(), classes.end());
  FeatureDataset out;
  out.n_dims = ds.n_dims;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!wanted.contains(ds.labels[i])) continue;
    out.labels.push_back(ds.labels[i]);
    const auto row = ds.row(i);
    out.features.insert(out.features.end(), row.begin(), row.end());
    if (ds.has_rotations()) out.rotations.push_back(ds.rotations[i]);
  }
  return out;
}

}  // namespace ivoro
