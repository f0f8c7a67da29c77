// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "ivoro/augment.hpp"
#include "ivoro/error.hpp"

using namespace ivoro;

namespace {

DistanceTensor from_oracle(const oracle::Tensor& t) {
  DistanceTensor d(t[0][0].size());
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b)
      for (std::size_t k = 0; k < t[a][b].size(); ++k) d.at(a, b, k) = t[a][b][k];
  return d;
}

oracle::Tensor random_tensor(std::mt19937_64& rng, std::size_t K, bool coarse) {
  oracle::Tensor t(4, std::vector<std::vector<double>>(4, std::vector<double>(K)));
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> small(0, 3);
  for (auto& plane : t)
    for (auto& row : plane)
      for (auto& v : row) v = coarse ? small(rng) : u(rng);
  return t;
}

std::vector<std::vector<double>> members_of(const DistanceTensor& t) {
  std::vector<std::vector<double>> out;
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      auto s = t.slice(a, b);
      out.emplace_back(s.begin(), s.end());
    }
  return out;
}

}  // namespace

TEST_SUITE("augment") {
  TEST_CASE("label map") {
    for (ClassId k = 0; k < 50; ++k)
      for (std::uint8_t r = 0; r < 4; ++r) {
        const auto e = AugmentedLabelMap::expand(k, r);
        CHECK(AugmentedLabelMap::base(e) == k);
        CHECK(AugmentedLabelMap::rotation(e) == r);
      }
  }

  TEST_CASE("rotate90") {
    Image img{2, 2, 1, {1, 2, 3, 4}};  // [[a,b],[c,d]]
    CHECK(rotate90(img, 0) == img);
    CHECK(rotate90(img, 1).pixels == std::vector<double>{2, 4, 1, 3});
    Image rect{2, 3, 2, {}};
    for (int i = 0; i < 12; ++i) rect.pixels.push_back(i);
    const auto r1 = rotate90(rect, 1);
    CHECK(r1.height == 3);
    CHECK(r1.width == 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t c = 0; c < 2; ++c) CHECK(r1.at(3 - 1 - j, i, c) == rect.at(i, j, c));
    CHECK(rotate90(rotate90(rotate90(rotate90(rect, 1), 1), 1), 1) == rect);
    CHECK(rotate90(rect, 2) == rotate90(r1, 1));
    CHECK(rotate90(rect, -1) == rotate90(rect, 3));
    CHECK(rotate90(rect, 5) == r1);
  }

  TEST_CASE("consensus fixtures") {
    DistanceTensor t(4, 5.0);
    int n = 0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) t.at(a, b, n++ < 12 ? 3 : 1) = 0.0;
    CHECK(consensus(t) == 3);

    // 8/8 tie; class 1 accumulates less distance
    DistanceTensor tie(2, 0.0);
    n = 0;
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        if (n++ < 8) {
          tie.at(a, b, 0) = 1.0;
          tie.at(a, b, 1) = 2.0;
        } else {
          tie.at(a, b, 0) = 5.0;
          tie.at(a, b, 1) = 1.0;
        }
      }
    CHECK(consensus(tie) == 1);
    CHECK(consensus(DistanceTensor(1, 2.0)) == 0);
  }

  TEST_CASE("integrate fixtures") {
    DistanceTensor t(2);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) {
        t.at(a, b, 0) = 10.0 / 16;
        t.at(a, b, 1) = 7.0 / 16;
      }
    CHECK(integrate(t) == 1);
    DistanceTensor u(5, 3.0);
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b) u.at(a, b, 2) = 1.0;
    CHECK(integrate(u) == 2);
    CHECK(consensus(u) == 2);
  }

  TEST_CASE("consensus and integrate match brute force") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 500; ++i) {
      const std::size_t K = 1 + i % 7;
      const auto o = random_tensor(rng, K, i % 2 == 0);
      const auto t = from_oracle(o);
      CHECK(integrate(t) == oracle::integrate(o));
      CHECK(consensus(t) == oracle::consensus(o));
      CHECK(integrate(t, PairSet::diagonal) == oracle::integrate(o, true));
      CHECK(consensus(t, PairSet::diagonal) == oracle::consensus(o, true));
    }
  }

  TEST_CASE("integrate ignores a common shift") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 200; ++i) {
      auto o = random_tensor(rng, 6, false);
      const auto base = integrate(from_oracle(o));
      for (auto& p : o)
        for (auto& r : p)
          for (auto& v : r) v += 3.5;
      CHECK(integrate(from_oracle(o)) == base);
    }
  }

  TEST_CASE("hv") {
    DistanceTensor same(3, 2.0);
    CHECK(hv(same) == 0.0);
    CHECK(hv_terms(same).entropy == 0.0);

    // members at +-e_k corners, every deviation equal
    std::vector<std::vector<double>> eq;
    for (int m = 0; m < 16; ++m) {
      std::vector<double> v(8, 1.0);
      v[m % 8] += (m < 8 ? 1.0 : -1.0);
      eq.push_back(v);
    }
    const auto terms = hv_terms(eq);
    CHECK(terms.entropy == doctest::Approx(std::log(16.0)).epsilon(1e-12));
    CHECK(terms.hv() == doctest::Approx(terms.variance * std::log(16.0)).epsilon(1e-12));

    std::vector<std::vector<double>> outlier(16, std::vector<double>{1, 2, 3});
    outlier[5] = {4, 0, 9};
    const auto ref = oracle::hv(outlier);
    const auto got = hv_terms(outlier);
    CHECK(std::abs(got.entropy - ref.h) <= 1e-12);
    CHECK(std::abs(got.variance - ref.v) <= 1e-12 * ref.v);
  }

  TEST_CASE("hv is permutation invariant and scales as documented") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
      const auto t = from_oracle(random_tensor(rng, 5, false));
      auto m = members_of(t);
      const auto base = hv_terms(m);
      std::shuffle(m.begin(), m.end(), rng);
      CHECK(std::abs(hv_terms(m).hv() - base.hv()) <= 1e-9 * base.hv());
      CHECK(std::abs(hv(t) - base.hv()) <= 1e-12 * base.hv());

      // scale deviations about the mean by s
      const double s = 3.0;
      std::vector<double> mean(5, 0.0);
      for (auto& v : m)
        for (std::size_t k = 0; k < 5; ++k) mean[k] += v[k] / 16;
      for (auto& v : m)
        for (std::size_t k = 0; k < 5; ++k) v[k] = mean[k] + s * (v[k] - mean[k]);
      const auto scaled = hv_terms(m);
      CHECK(std::abs(scaled.entropy - base.entropy) <= 1e-9);
      CHECK(std::abs(scaled.variance - s * s * base.variance) <= 1e-9 * scaled.variance);
    }
  }

  TEST_CASE("pearson") {
    const std::vector<double> x{1, 2, 3, 4};
    CHECK(std::abs(pearson(x, std::vector<double>{2, 1, 4, 3}) - 0.6) <= 1e-12);
    CHECK(pearson(x, std::vector<double>{3, 5, 7, 9}) == 1.0);
    CHECK(pearson(x, std::vector<double>{-1, -2, -3, -4}) == -1.0);
    CHECK_THROWS_AS(pearson(x, std::vector<double>{1, 1, 1, 1}), DataError);
    CHECK_THROWS_AS(pearson(std::vector<double>{1}, std::vector<double>{1}), DataError);
    std::mt19937_64 rng(24);
    for (int i = 0; i < 200; ++i) {
      const auto a = oracle::random_vector(rng, 10), b = oracle::random_vector(rng, 10);
      const double r = pearson(a, b);
      CHECK(r >= -1.0);
      CHECK(r <= 1.0);
      CHECK(std::abs(r - oracle::pearson(a, b)) <= 1e-12);
    }
  }

  TEST_CASE("tensor validation") {
    DistanceTensor t(2);
    t.at(1, 2, 1) = -1;
    CHECK_THROWS_AS(t.validate(), DataError);
    CHECK_THROWS_AS(DistanceTensor().validate(), DataError);
  }
}
