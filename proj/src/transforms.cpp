// SPDX-License-Identifier: Apache-2.0
#include "ivoro/transforms.hpp"

#include <cmath>
#include <string>

#include "ivoro/error.hpp"
#include "ivoro/simd/kernels.hpp"

namespace ivoro {

void TransformParams::validate() const {
  if (!std::isfinite(scale) || !std::isfinite(shift) || !std::isfinite(lambda)) {
    throw ConfigError("transform parameters must be finite");
  }
  if (enabled && scale == 0.0) throw ConfigError("transform scale w must be nonzero");
  if (!(epsilon > 0.0)) throw ConfigError("transform epsilon must be positive");
}

FeatureVector l2_normalize(std::span<const double> z) {
  const double norm = std::sqrt(simd::dot(z, z));
  if (!(norm > 0.0)) throw DataError("l2_normalize: zero vector");
  FeatureVector out(z.begin(), z.end());
  for (double& v : out) v /= norm;
  return out;
}

FeatureVector linear_transform(std::span<const double> z, double scale, double shift) {
  FeatureVector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = scale * z[i] + shift;
  return out;
}

FeatureVector tukey(std::span<const double> z, double lambda, double epsilon, NegativePolicy policy) {
  const bool floor_needed = lambda <= 0.0 || lambda != std::floor(lambda);
  FeatureVector out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    double v = z[i];
    if (v < 0.0) {
      if (policy == NegativePolicy::reject) {
        throw DataError("tukey: negative component " + std::to_string(v) + " at index " + std::to_string(i));
      }
      v = epsilon;
    }
    if (floor_needed && v < epsilon) v = epsilon;
    out[i] = lambda == 0.0 ? std::log(v) : (lambda == 1.0 ? v : std::pow(v, lambda));
  }
  return out;
}

FeatureVector compose(std::span<const double> z, const TransformParams& params) {
  if (!params.enabled) return FeatureVector(z.begin(), z.end());
  params.validate();
  return tukey(linear_transform(l2_normalize(z), params.scale, params.shift), params.lambda, params.epsilon,
               params.negative_policy);
}

}  // namespace ivoro
