// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ivoro/bench.hpp"
#include "ivoro/error.hpp"

namespace ivoro {

using nlohmann::json;

std::string ModeFlags::to_string() const {
  std::string s;
  if (normalize) s += "N";
  if (dnc) s += "D";
  if (residual) s += "R";
  if (consensus) s += "AC";
  if (integration) s += "AI";
  if (layered) s += "L";
  return s;
}

ModeFlags parse_mode(std::string_view text) {
  ModeFlags m;
  auto set_once = [&](bool& flag, std::string_view token) {
    if (flag) throw ConfigError("mode component '" + std::string(token) + "' given twice");
    flag = true;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'N': set_once(m.normalize, "N"); break;
      case 'D': set_once(m.dnc, "D"); break;
      case 'R': set_once(m.residual, "R"); break;
      case 'L': set_once(m.layered, "L"); break;
      case 'A':
        if (i + 1 < text.size() && text[i + 1] == 'C') {
          set_once(m.consensus, "AC");
        } else if (i + 1 < text.size() && text[i + 1] == 'I') {
          set_once(m.integration, "AI");
        } else {
          throw ConfigError("mode component 'A' must be followed by C or I");
        }
        ++i;
        break;
      default:
        throw ConfigError("unknown mode component '" + std::string(1, text[i]) + "' in \"" + std::string(text) + "\"");
    }
  }
  if (m.consensus && m.integration) throw ConfigError("mode components AC and AI are mutually exclusive");
  return m;
}

void RunConfig::validate(const PhaseManifest* manifest) const {
  if (mode.consensus && mode.integration) throw ConfigError("mode components AC and AI are mutually exclusive");
  probe.validate();
  if (mode.normalize) transform.validate();
  if (gamma == 0.0 || !std::isfinite(gamma)) throw ConfigError("gamma must be finite and nonzero");
  if (mode.layered && mode.augmented() && gamma < 0.0) {
    throw ConfigError("layered augmentation needs gamma > 0 so that tensor entries stay nonnegative");
  }
  if (manifest == nullptr) return;
  manifest->validate();
  if (mode.augmented() && manifest->augmentations != 4) {
    throw ConfigError("mode " + mode.to_string() + " needs a manifest with augmentations = 4");
  }
  if (mode.layered && manifest->layers.size() < 2) {
    throw ConfigError("mode L needs at least 2 layers in the manifest, found " + std::to_string(manifest->layers.size()));
  }
}

TransformParams RunConfig::effective_transform() const {
  TransformParams t = transform;
  t.enabled = mode.normalize && transform.enabled;
  return t;
}

namespace {

GradientMode parse_gradient_mode(const std::string& s) {
  if (s == "fixed_bias") return GradientMode::fixed_bias;
  if (s == "coupled") return GradientMode::coupled;
  throw ConfigError("unknown gradient_mode '" + s + "'");
}

QueryRule parse_query_rule(const std::string& s) {
  if (s == "two_stage") return QueryRule::two_stage;
  if (s == "tournament") return QueryRule::tournament;
  throw ConfigError("unknown query_rule '" + s + "'");
}

NegativePolicy parse_policy(const std::string& s) {
  if (s == "reject") return NegativePolicy::reject;
  if (s == "clamp") return NegativePolicy::clamp;
  throw ConfigError("unknown negative_policy '" + s + "'");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("run config is not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  try {
    cfg.mode = parse_mode(doc.value("mode", std::string{}));
    auto path_field = [&](const char* key) -> std::filesystem::path {
      if (!doc.contains(key)) return {};
      std::filesystem::path p = doc.at(key).get<std::string>();
      return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    cfg.manifest = path_field("manifest");
    cfg.output_dir = path_field("output");
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.gamma = doc.value("gamma", cfg.gamma);
    cfg.diagonal_augmentation = doc.value("diagonal_augmentation", cfg.diagonal_augmentation);
    cfg.query_rule = parse_query_rule(doc.value("query_rule", std::string("two_stage")));
    if (doc.contains("probe")) {
      const auto& p = doc.at("probe");
      cfg.probe.epochs = p.value("epochs", cfg.probe.epochs);
      cfg.probe.batch_size = p.value("batch_size", cfg.probe.batch_size);
      cfg.probe.learning_rate = p.value("learning_rate", cfg.probe.learning_rate);
      cfg.probe.weight_decay = p.value("weight_decay", cfg.probe.weight_decay);
      cfg.probe.shuffle = p.value("shuffle", cfg.probe.shuffle);
      cfg.probe.gradient_mode = parse_gradient_mode(p.value("gradient_mode", std::string("fixed_bias")));
    }
    if (doc.contains("transform")) {
      const auto& t = doc.at("transform");
      cfg.transform.enabled = t.value("enabled", cfg.transform.enabled);
      cfg.transform.scale = t.value("scale", cfg.transform.scale);
      cfg.transform.shift = t.value("shift", cfg.transform.shift);
      cfg.transform.lambda = t.value("lambda", cfg.transform.lambda);
      cfg.transform.epsilon = t.value("epsilon", cfg.transform.epsilon);
      cfg.transform.negative_policy = parse_policy(t.value("negative_policy", std::string("reject")));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.parent_path());
}

std::string dump_run_config(const RunConfig& cfg) {
  json doc;
  doc["mode"] = cfg.mode.to_string();
  doc["manifest"] = cfg.manifest.generic_string();
  doc["output"] = cfg.output_dir.generic_string();
  doc["seed"] = cfg.seed;
  doc["gamma"] = cfg.gamma;
  doc["diagonal_augmentation"] = cfg.diagonal_augmentation;
  doc["query_rule"] = cfg.query_rule == QueryRule::tournament ? "tournament" : "two_stage";
  doc["probe"] = {{"epochs", cfg.probe.epochs},
                  {"batch_size", cfg.probe.batch_size},
                  {"learning_rate", cfg.probe.learning_rate},
                  {"weight_decay", cfg.probe.weight_decay},
                  {"shuffle", cfg.probe.shuffle},
                  {"gradient_mode", cfg.probe.gradient_mode == GradientMode::coupled ? "coupled" : "fixed_bias"}};
  doc["transform"] = {{"enabled", cfg.transform.enabled},
                      {"scale", cfg.transform.scale},
                      {"shift", cfg.transform.shift},
                      {"lambda", cfg.transform.lambda},
                      {"epsilon", cfg.transform.epsilon},
                      {"negative_policy", cfg.transform.negative_policy == NegativePolicy::clamp ? "clamp" : "reject"}};
  return doc.dump(2) + "\n";
}

}  // namespace ivoro
