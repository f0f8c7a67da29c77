// SPDX-License-Identifier: Apache-2.0
#include "ivoro/augment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ivoro/error.hpp"

namespace ivoro {

namespace {

std::vector<std::pair<std::size_t, std::size_t>> pair_list(PairSet pairs) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < kRotations; ++a) {
    for (std::size_t b = 0; b < kRotations; ++b) {
      if (pairs == PairSet::full || a == b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::size_t argmin_lowest(std::span<const double> v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

std::vector<double> summed_distances(const DistanceTensor& t, PairSet pairs) {
  std::vector<double> sums(t.num_classes(), 0.0);
  for (auto [a, b] : pair_list(pairs)) {
    const auto s = t.slice(a, b);
    for (std::size_t k = 0; k < sums.size(); ++k) sums[k] += s[k];
  }
  return sums;
}

}  // namespace

DistanceTensor::DistanceTensor(std::size_t num_classes, double fill)
    : k_(num_classes), data_(kRotations * kRotations * num_classes, fill) {}

void DistanceTensor::validate() const {
  if (k_ == 0) throw DataError("distance tensor has no classes");
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i]) || data_[i] < 0.0) {
      throw DataError("distance tensor entry " + std::to_string(i) + " is negative or non-finite");
    }
  }
}

Image rotate90(const Image& image, int turns) {
  turns = ((turns % 4) + 4) % 4;
  Image cur = image;
  for (int t = 0; t < turns; ++t) {
    Image next;
    next.height = cur.width;
    next.width = cur.height;
    next.channels = cur.channels;
    next.pixels.resize(cur.pixels.size());
    for (std::size_t i = 0; i < cur.height; ++i) {
      for (std::size_t j = 0; j < cur.width; ++j) {
        for (std::size_t c = 0; c < cur.channels; ++c) next.at(cur.width - 1 - j, i, c) = cur.at(i, j, c);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

ClassId consensus(const DistanceTensor& t, PairSet pairs) {
  t.validate();
  std::vector<std::size_t> votes(t.num_classes(), 0);
  for (auto [a, b] : pair_list(pairs)) ++votes[argmin_lowest(t.slice(a, b))];
  const std::size_t top = *std::max_element(votes.begin(), votes.end());
  const auto sums = summed_distances(t, pairs);
  std::size_t best = t.num_classes();
  for (std::size_t k = 0; k < votes.size(); ++k) {
    if (votes[k] != top) continue;
    if (best == t.num_classes() || sums[k] < sums[best]) best = k;
  }
  return static_cast<ClassId>(best);
}

ClassId integrate(const DistanceTensor& t, PairSet pairs) {
  t.validate();
  return static_cast<ClassId>(argmin_lowest(summed_distances(t, pairs)));
}

HvTerms hv_terms(std::span<const std::vector<double>> members) {
  if (members.empty()) throw DataError("hv: no members");
  const std::size_t K = members.front().size();
  std::vector<double> mean(K, 0.0);
  for (const auto& m : members) {
    if (m.size() != K) throw DataError("hv: members differ in length");
    for (std::size_t k = 0; k < K; ++k) mean[k] += m[k];
  }
  for (double& v : mean) v /= static_cast<double>(members.size());

  std::vector<double> dev(members.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      const double d = mean[k] - members[i][k];
      dev[i] += d * d;
    }
    total += dev[i];
  }
  HvTerms out;
  out.variance = total;
  if (!(total > 0.0)) return out;
  for (double d : dev) {
    if (d > 0.0) {
      const double q = d / total;
      out.entropy -= q * std::log(q);
    }
  }
  return out;
}

HvTerms hv_terms(const DistanceTensor& t, PairSet pairs) {
  t.validate();
  std::vector<std::vector<double>> members;
  for (auto [a, b] : pair_list(pairs)) {
    const auto s = t.slice(a, b);
    members.emplace_back(s.begin(), s.end());
  }
  return hv_terms(members);
}

double hv(const DistanceTensor& t, PairSet pairs) { return hv_terms(t, pairs).hv(); }

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("pearson: length mismatch");
  if (x.size() < 2) throw DataError("pearson: need at least 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DataError("pearson: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace ivoro
