// SPDX-License-Identifier: Apache-2.0
#pragma once

// Feature normalization pipeline: L2 projection onto the unit sphere, an
// affine rescale `w z + eta`, then Tukey's ladder of powers. The same
// parameters must be applied to training and query features.

#include <span>

#include "ivoro/types.hpp"

namespace ivoro {

enum class NegativePolicy : std::uint8_t { reject = 0, clamp = 1 };

struct TransformParams {
  bool enabled = false;
  double scale = 1.0;    // w
  double shift = 0.0;    // eta
  double lambda = 0.5;   // Tukey exponent
  double epsilon = 1e-8; // positivity floor
  NegativePolicy negative_policy = NegativePolicy::reject;

  /// Throws ConfigError when the parameters cannot be applied.
  void validate() const;

  friend bool operator==(const TransformParams&, const TransformParams&) = default;
};

FeatureVector l2_normalize(std::span<const double> z);

FeatureVector linear_transform(std::span<const double> z, double scale, double shift);

/// Elementwise z^lambda, or log(max(z, eps)) for lambda == 0. Components are
/// floored at eps first when lambda <= 0 or lambda is not an integer.
/// Negative components are rejected unless `policy` is clamp.
FeatureVector tukey(std::span<const double> z, double lambda, double epsilon,
                    NegativePolicy policy = NegativePolicy::reject);

/// tukey(linear_transform(l2_normalize(z))); identity when disabled.
FeatureVector compose(std::span<const double> z, const TransformParams& params);

}  // namespace ivoro
