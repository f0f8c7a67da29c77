// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "ivoro/error.hpp"
#include "ivoro/geometry.hpp"

using namespace ivoro;

namespace {

Center make_center(std::vector<double> v, double w = 0.0, ClassId id = 0) {
  Center c;
  c.vector = std::move(v);
  c.weight = w;
  c.class_id = id;
  return c;
}

LinearProbe probe_from(const std::vector<std::vector<double>>& W, std::vector<double> b, bool constrained) {
  LinearProbe p;
  p.weights = Matrix(W.size(), W[0].size());
  for (std::size_t k = 0; k < W.size(); ++k)
    for (std::size_t i = 0; i < W[k].size(); ++i) p.weights(k, i) = W[k][i];
  p.bias = std::move(b);
  for (std::size_t k = 0; k < W.size(); ++k) p.class_ids.push_back(static_cast<ClassId>(k));
  p.constrained = constrained;
  return p;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("power_score") {
    const std::vector<double> z{1, 0};
    CHECK(power_score(z, make_center({0, 0})) == 1.0);
    CHECK(power_score(z, make_center({2, 0}, 3.0)) == -2.0);
    CHECK(power_score(z, make_center({1, 0})) == 0.0);
    CHECK_THROWS_AS(power_score(z, make_center({1, 0, 0})), DataError);
  }

  TEST_CASE("assign_cell") {
    const std::vector<Center> c{make_center({0, 0}), make_center({2, 0})};
    CHECK(assign_cell(std::vector<double>{0.5, 0}, c) == 0);
    CHECK(assign_cell(std::vector<double>{1, 0}, c) == 0);
    const std::vector<Center> weighted{make_center({0, 0}), make_center({2, 0}, 3.0)};
    CHECK(assign_cell(std::vector<double>{1, 0}, weighted) == 1);
    CHECK_THROWS_AS(assign_cell(std::vector<double>{1, 0}, std::vector<Center>{}), DataError);
  }

  TEST_CASE("bisector") {
    auto b = bisector(make_center({0, 0}), make_center({2, 0}));
    CHECK(b.normal[0] == -1.0);
    CHECK(b.normal[1] == 0.0);
    CHECK(b.offset == -1.0);
    b = bisector(make_center({1, 0}), make_center({-1, 0}));
    CHECK(b.normal[0] == 1.0);
    CHECK(b.offset == 0.0);
    CHECK_THROWS_AS(bisector(make_center({0, 0}), make_center({0, 0})), DataError);
  }

  TEST_CASE("bisector sign agrees with distance comparison") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t n = 1 + trial % 9;
      const auto c1 = oracle::random_vector(rng, n), c2 = oracle::random_vector(rng, n), z = oracle::random_vector(rng, n);
      const auto b = bisector(make_center(c1), make_center(c2));
      double norm = 0;
      for (double v : b.normal) norm += v * v;
      CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-9);
      CHECK(b.evaluate(c1) > 0.0);
      CHECK(b.evaluate(c2) < 0.0);
      const double d1 = oracle::sqdist(z, c1), d2 = oracle::sqdist(z, c2);
      if (std::abs(d1 - d2) < 1e-9) continue;
      CHECK((b.evaluate(z) > 0.0) == (d1 < d2));
    }
  }

  TEST_CASE("constrain_bias") {
    Matrix W(3, 2);
    W(0, 0) = 2;
    W(2, 0) = 1;
    W(2, 1) = 1;
    const auto b = constrain_bias(W);
    CHECK(b[0] == -1.0);
    CHECK(b[1] == 0.0);
    CHECK(b[2] == -0.5);
    W(1, 1) = std::nan("");
    CHECK_THROWS_AS(constrain_bias(W), DataError);
  }

  TEST_CASE("reduce_to_vd") {
    auto c = reduce_to_vd(probe_from({{2, 0}, {0, 0}}, {-1, 0}, true));
    REQUIRE(c.size() == 2);
    CHECK(c[0].vector == std::vector<double>{1, 0});
    CHECK(c[0].kind == CenterKind::probing);
    CHECK(c[0].weight == 0.0);
    CHECK(c[1].vector == std::vector<double>{0, 0});
    CHECK_THROWS_AS(reduce_to_vd(probe_from({{2, 0}}, {0}, true)), DataError);
    CHECK_THROWS_AS(reduce_to_vd(probe_from({{2, 0}}, {-1}, false)), DataError);
  }

  TEST_CASE("linear argmax equals nearest reduced center") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> kd(2, 10), nd(1, 64);
    for (int trial = 0; trial < 2000; ++trial) {
      const std::size_t K = kd(rng), n = nd(rng);
      std::vector<std::vector<double>> W(K);
      std::vector<double> b(K);
      for (std::size_t k = 0; k < K; ++k) {
        W[k] = oracle::random_vector(rng, n, -3, 3);
        double s = 0;
        for (double v : W[k]) s += v * v;
        b[k] = -0.25 * s;
      }
      const auto probe = probe_from(W, b, true);
      const auto centers = reduce_to_vd(probe);
      const auto z = oracle::random_vector(rng, n, -3, 3);
      CHECK(probe_argmax(probe, z) == oracle::argmax(oracle::linear_scores(W, b, z)));
      CHECK(assign_cell(z, centers) == probe_argmax(probe, z));
    }
  }

  TEST_CASE("farther appended center does not change the winner") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<Center> c;
      for (int k = 0; k < 5; ++k) c.push_back(make_center(oracle::random_vector(rng, 4)));
      const auto z = oracle::random_vector(rng, 4);
      const auto w = assign_cell(z, c);
      std::vector<double> far = z;
      far[0] += 100.0;
      c.push_back(make_center(far));
      CHECK(assign_cell(z, c) == w);
    }
  }

  TEST_CASE("equal weights collapse to the Voronoi argmin") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<Center> plain, weighted;
      for (int k = 0; k < 6; ++k) {
        auto v = oracle::random_vector(rng, 3);
        plain.push_back(make_center(v));
        weighted.push_back(make_center(v, 0.75));
      }
      const auto z = oracle::random_vector(rng, 3);
      CHECK(assign_cell(z, plain) == assign_cell(z, weighted));
    }
  }
}
