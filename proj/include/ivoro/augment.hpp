// SPDX-License-Identifier: Apache-2.0
#pragma once

// Rotation label augmentation and test-time resolution of the resulting
// ambiguity: every rotated query is compared against every rotated copy of
// each class, giving a 4 x 4 x K tensor of squared distances.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ivoro/types.hpp"

namespace ivoro {

inline constexpr std::size_t kRotations = 4;

/// Expanded label id = base * 4 + rotation.
struct AugmentedLabelMap {
  static constexpr ClassId expand(ClassId base, std::uint8_t rotation) { return base * 4 + rotation; }
  static constexpr ClassId base(ClassId expanded) { return expanded / 4; }
  static constexpr std::uint8_t rotation(ClassId expanded) { return static_cast<std::uint8_t>(expanded % 4); }
};

/// Which (query rotation, class rotation) pairs take part in a decision.
enum class PairSet { full, diagonal };

class DistanceTensor {
 public:
  DistanceTensor() = default;
  explicit DistanceTensor(std::size_t num_classes, double fill = 0.0);

  std::size_t num_classes() const noexcept { return k_; }

  double& at(std::size_t query_rot, std::size_t class_rot, std::size_t k) {
    return data_[(query_rot * kRotations + class_rot) * k_ + k];
  }
  double at(std::size_t query_rot, std::size_t class_rot, std::size_t k) const {
    return data_[(query_rot * kRotations + class_rot) * k_ + k];
  }

  /// K distances of one (query rotation, class rotation) pair.
  std::span<const double> slice(std::size_t query_rot, std::size_t class_rot) const {
    return {data_.data() + (query_rot * kRotations + class_rot) * k_, k_};
  }

  /// Throws DataError unless K >= 1 and every entry is finite and >= 0.
  void validate() const;

 private:
  std::size_t k_ = 0;
  std::vector<double> data_;
};

/// Row-major H x W x C array.
struct Image {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 1;
  std::vector<double> pixels;

  double at(std::size_t i, std::size_t j, std::size_t c = 0) const { return pixels[(i * width + j) * channels + c]; }
  double& at(std::size_t i, std::size_t j, std::size_t c = 0) { return pixels[(i * width + j) * channels + c]; }

  friend bool operator==(const Image&, const Image&) = default;
};

/// Counter-clockwise rotation by 90 degrees times `turns` (any integer).
Image rotate90(const Image& image, int turns);

ClassId consensus(const DistanceTensor& t, PairSet pairs = PairSet::full);
ClassId integrate(const DistanceTensor& t, PairSet pairs = PairSet::full);

struct HvTerms {
  double entropy = 0.0;   // H
  double variance = 0.0;  // V
  double hv() const { return entropy * variance; }
};

/// Entropy-based geometric variance of the member vectors d^(a,a') around
/// their mean. Natural log, 0 log 0 = 0, and H = 0 when V = 0.
HvTerms hv_terms(const DistanceTensor& t, PairSet pairs = PairSet::full);
double hv(const DistanceTensor& t, PairSet pairs = PairSet::full);

/// Same quantity for an explicit list of member vectors (all of length K).
HvTerms hv_terms(std::span<const std::vector<double>> members);

/// Sample Pearson correlation coefficient.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace ivoro
