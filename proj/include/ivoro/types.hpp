// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ivoro {

using FeatureVector = std::vector<double>;
using ClassId = std::uint32_t;
using PhaseId = std::int32_t;

/// Row-major dense matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class CenterKind : std::uint8_t { prototype = 0, probing = 1, residual = 2 };

std::string_view to_string(CenterKind kind);

/// A weighted site of a power diagram. `weight` plays the role of a squared
/// radius; zero weight everywhere gives an ordinary Voronoi diagram.
struct Center {
  FeatureVector vector;
  double weight = 0.0;
  ClassId class_id = 0;
  PhaseId phase_id = 0;
  CenterKind kind = CenterKind::prototype;

  friend bool operator==(const Center&, const Center&) = default;
};

}  // namespace ivoro
