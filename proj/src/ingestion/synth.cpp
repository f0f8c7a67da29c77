// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "ivoro/error.hpp"
#include "ivoro/ingestion.hpp"

namespace ivoro {

void SynthConfig::validate() const {
  if (n_classes < 1 || n_dims < 1 || samples_per_class < 1) {
    throw ConfigError("synth: class, dimension, and sample counts must be >= 1");
  }
  if (!(spread > 0.0)) throw ConfigError("synth: spread must be positive");
  if (!(covariance_scale >= 0.0)) throw ConfigError("synth: covariance scale must be >= 0");
  if (!(anisotropy >= 1.0)) throw ConfigError("synth: anisotropy must be >= 1");
  if (!(rotation_offset >= 0.0)) throw ConfigError("synth: rotation offset must be >= 0");
  if (augmentations != 1 && augmentations != 4) throw ConfigError("synth: augmentations must be 1 or 4");
  if (layers < 1) throw ConfigError("synth: at least one layer required");
}

namespace {

double as_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

struct LayerDraw {
  FeatureDataset train;
  FeatureDataset test;
  Matrix means;
};

LayerDraw draw_layer(const SynthConfig& cfg, std::size_t layer, std::size_t n_train, std::size_t n_test) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(layer)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = cfg.n_dims;

  auto random_direction = [&] {
    FeatureVector v(n);
    double norm = 0.0;
    while (!(norm > 0.0)) {
      norm = 0.0;
      for (double& x : v) {
        x = gauss(rng);
        norm += x * x;
      }
    }
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    return v;
  };

  LayerDraw out;
  out.means = Matrix(cfg.n_classes, n);
  Matrix stddev(cfg.n_classes, n);
  std::vector<Matrix> offsets(cfg.n_classes, Matrix(4, n));
  const double log_a = std::log(cfg.anisotropy);
  for (std::size_t k = 0; k < cfg.n_classes; ++k) {
    const auto dir = random_direction();
    const double radius = cfg.spread * std::pow(unit(rng), 1.0 / static_cast<double>(n));
    for (std::size_t d = 0; d < n; ++d) out.means(k, d) = radius * dir[d];
    for (std::size_t d = 0; d < n; ++d) {
      const double factor = log_a > 0.0 ? std::exp(log_a * (2.0 * unit(rng) - 1.0)) : 1.0;
      stddev(k, d) = cfg.covariance_scale * factor;
    }
    if (cfg.augmentations == 4) {
      for (std::size_t a = 1; a < 4; ++a) {
        const auto off = random_direction();
        for (std::size_t d = 0; d < n; ++d) offsets[k](a, d) = cfg.rotation_offset * off[d];
      }
    }
  }

  out.train.n_dims = out.test.n_dims = n;
  FeatureVector base(n), row(n);
  for (std::size_t k = 0; k < cfg.n_classes; ++k) {
    for (std::size_t i = 0; i < n_train + n_test; ++i) {
      FeatureDataset& target = i < n_train ? out.train : out.test;
      for (std::size_t d = 0; d < n; ++d) base[d] = out.means(k, d) + stddev(k, d) * gauss(rng);
      const auto label = static_cast<ClassId>(k);
      if (cfg.augmentations == 1) {
        for (std::size_t d = 0; d < n; ++d) row[d] = as_f32(base[d]);
        target.push_back(label, row);
      } else {
        for (std::uint8_t a = 0; a < 4; ++a) {
          for (std::size_t d = 0; d < n; ++d) row[d] = as_f32(base[d] + offsets[k](a, d));
          target.push_back(label, row, a);
        }
      }
    }
  }
  return out;
}

}  // namespace

FeatureDataset synth_gaussian(const SynthConfig& cfg) {
  cfg.validate();
  return draw_layer(cfg, 0, cfg.samples_per_class, 0).train;
}

SynthSplit synth_benchmark(const SynthConfig& cfg) {
  cfg.validate();
  const std::size_t n_test = std::max<std::size_t>(1, cfg.samples_per_class / 5);
  SynthSplit split;
  for (std::size_t l = 0; l < cfg.layers; ++l) {
    auto draw = draw_layer(cfg, l, cfg.samples_per_class, n_test);
    split.train.push_back(std::move(draw.train));
    split.test.push_back(std::move(draw.test));
    split.means.push_back(std::move(draw.means));
  }
  return split;
}

}  // namespace ivoro
