// SPDX-License-Identifier: Apache-2.0
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ivoro/error.hpp"
#include "ivoro/ingestion.hpp"

namespace ivoro {

namespace fs = std::filesystem;
using nlohmann::json;

void PhaseManifest::validate() const {
  if (phases.empty()) throw ConfigError("manifest has no phases");
  std::set<ClassId> seen;
  for (std::size_t t = 0; t < phases.size(); ++t) {
    if (phases[t].empty()) throw ConfigError("manifest phase " + std::to_string(t) + " is empty");
    for (ClassId c : phases[t]) {
      if (!seen.insert(c).second) {
        throw ConfigError("class " + std::to_string(c) + " listed more than once (phase " + std::to_string(t) + ")");
      }
    }
  }
  if (augmentations != 1 && augmentations != 4) {
    throw ConfigError("augmentations must be 1 or 4, got " + std::to_string(augmentations));
  }
  if (layers.empty()) throw ConfigError("manifest declares no feature layers");
  std::set<std::string> names;
  for (const auto& layer : layers) {
    if (layer.name.empty()) throw ConfigError("layer with empty name");
    if (!names.insert(layer.name).second) throw ConfigError("duplicate layer name '" + layer.name + "'");
  }
}

PhaseManifest parse_manifest(const std::string& text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  PhaseManifest m;
  try {
    const int version = doc.value("version", kManifestVersion);
    if (version != kManifestVersion) throw ConfigError("unsupported manifest version " + std::to_string(version));
    m.augmentations = doc.value("augmentations", 1);
    m.phases = doc.at("phases").get<std::vector<std::vector<ClassId>>>();
    for (const auto& entry : doc.at("layers")) {
      LayerFiles layer;
      layer.name = entry.at("name").get<std::string>();
      layer.train = entry.at("train").get<std::string>();
      layer.test = entry.at("test").get<std::string>();
      if (layer.train.is_relative()) layer.train = base_dir / layer.train;
      if (layer.test.is_relative()) layer.test = base_dir / layer.test;
      m.layers.push_back(std::move(layer));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
  m.validate();
  return m;
}

PhaseManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  PhaseManifest m = parse_manifest(ss.str(), path.parent_path());
  for (const auto& layer : m.layers) {
    for (const auto& file : {layer.train, layer.test}) {
      if (!fs::exists(file)) throw ConfigError("manifest references missing file " + file.string());
    }
  }
  return m;
}

std::string dump_manifest(const PhaseManifest& manifest, const fs::path& base_dir) {
  auto rel = [&](const fs::path& p) {
    if (base_dir.empty()) return p.generic_string();
    return p.lexically_relative(base_dir).generic_string();
  };
  json doc;
  doc["version"] = kManifestVersion;
  doc["augmentations"] = manifest.augmentations;
  doc["phases"] = manifest.phases;
  doc["layers"] = json::array();
  for (const auto& layer : manifest.layers) {
    doc["layers"].push_back({{"name", layer.name}, {"train", rel(layer.train)}, {"test", rel(layer.test)}});
  }
  return doc.dump(2) + "\n";
}

void save_manifest(const PhaseManifest& manifest, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCategory::runtime, "cannot write manifest " + path.string());
  out << dump_manifest(manifest, path.parent_path());
}

std::vector<FeatureDataset> split_phases(const FeatureDataset& ds, const PhaseManifest& manifest) {
  if (manifest.phases.empty()) throw ConfigError("manifest has no phases");
  std::map<ClassId, std::size_t> phase_of;
  for (std::size_t t = 0; t < manifest.phases.size(); ++t) {
    if (manifest.phases[t].empty()) throw ConfigError("manifest phase " + std::to_string(t) + " is empty");
    for (ClassId c : manifest.phases[t]) {
      if (!phase_of.emplace(c, t).second) {
        throw ConfigError("class " + std::to_string(c) + " is assigned to more than one phase");
      }
    }
  }
  std::vector<FeatureDataset> out(manifest.phases.size());
  for (auto& part : out) part.n_dims = ds.n_dims;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto it = phase_of.find(ds.labels[i]);
    if (it == phase_of.end()) {
      throw DataError("class " + std::to_string(ds.labels[i]) + " is present in the data but not in any phase");
    }
    auto& part = out[it->second];
    part.labels.push_back(ds.labels[i]);
    const auto row = ds.row(i);
    part.features.insert(part.features.end(), row.begin(), row.end());
    if (ds.has_rotations()) part.rotations.push_back(ds.rotations[i]);
  }
  return out;
}

std::vector<std::vector<ClassId>> even_phases(std::size_t n_classes, std::size_t n_phases) {
  if (n_phases == 0 || n_phases > n_classes) {
    throw ConfigError("cannot split " + std::to_string(n_classes) + " classes into " + std::to_string(n_phases) +
                      " phases");
  }
  std::vector<std::vector<ClassId>> phases(n_phases);
  ClassId next = 0;
  for (std::size_t t = 0; t < n_phases; ++t) {
    const std::size_t count = n_classes / n_phases + (t < n_classes % n_phases ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) phases[t].push_back(next++);
  }
  return phases;
}

std::vector<std::vector<ClassId>> half_then_even_phases(std::size_t n_classes, std::size_t n_phases) {
  if (n_phases <= 1) return even_phases(n_classes, 1);
  const std::size_t base = n_classes / 2;
  if (base == 0 || n_classes - base < n_phases - 1) {
    throw ConfigError("cannot split " + std::to_string(n_classes) + " classes into a half base phase plus " +
                      std::to_string(n_phases - 1) + " phases");
  }
  auto rest = even_phases(n_classes - base, n_phases - 1);
  std::vector<std::vector<ClassId>> phases(1);
  for (ClassId c = 0; c < base; ++c) phases[0].push_back(c);
  for (auto& p : rest) {
    for (auto& c : p) c += static_cast<ClassId>(base);
    phases.push_back(std::move(p));
  }
  return phases;
}

}  // namespace ivoro
