// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "ivoro/civd.hpp"
#include "ivoro/error.hpp"
#include "ivoro/geometry.hpp"

using namespace ivoro;

namespace {

CenterCluster cluster(ClassId id, std::vector<std::vector<double>> layers) {
  CenterCluster c;
  c.class_id = id;
  for (auto& v : layers) c.members.push_back(Center{std::move(v)});
  return c;
}

}  // namespace

TEST_SUITE("civd") {
  TEST_CASE("influence fixtures") {
    // squared distances 1, 2, 3 at three layers
    const auto c = cluster(0, {{1}, {std::sqrt(2.0)}, {std::sqrt(3.0)}});
    const std::vector<FeatureVector> q{{0}, {0}, {0}};
    CHECK(influence(c, q, 1.0) == doctest::Approx(-6.0).epsilon(1e-15));
    const auto c2 = cluster(0, {{1}, {std::sqrt(2.0)}});
    const std::vector<FeatureVector> q2{{0}, {0}};
    CHECK(influence(c2, q2, -1.0) == doctest::Approx(1.5).epsilon(1e-15));
    const auto zero = cluster(0, {{0}, {1}});
    CHECK_THROWS_AS(influence(zero, q2, -1.0), DataError);
  }

  TEST_CASE("one layer, gamma 1 is the Voronoi assignment") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      LayeredModel m;
      std::vector<Center> flat;
      for (ClassId k = 0; k < 6; ++k) {
        auto v = oracle::random_vector(rng, 3);
        flat.push_back(Center{v});
        m.clusters.push_back(cluster(k, {v}));
      }
      for (int i = 0; i < 20; ++i) {
        const std::vector<FeatureVector> q{oracle::random_vector(rng, 3)};
        CHECK(assign_ccvd(m, q) == assign_cell(q[0], flat));
      }
      m.gamma = 0.5;
      const std::vector<FeatureVector> q{oracle::random_vector(rng, 3)};
      CHECK(assign_ccvd(m, q) == assign_cell(q[0], flat));
    }
  }

  TEST_CASE("brute force over two layers") {
    std::mt19937_64 rng(32);
    for (double gamma : {1.0, 2.0, 0.5, -1.0}) {
      for (int trial = 0; trial < 100; ++trial) {
        LayeredModel m;
        m.layer_count = 2;
        m.gamma = gamma;
        for (ClassId k = 0; k < 6; ++k)
          m.clusters.push_back(cluster(k, {oracle::random_vector(rng, 3), oracle::random_vector(rng, 5)}));
        const std::vector<FeatureVector> q{oracle::random_vector(rng, 3), oracle::random_vector(rng, 5)};
        std::vector<double> F;
        for (auto& c : m.clusters) {
          double s = 0;
          for (std::size_t l = 0; l < 2; ++l) s += std::pow(oracle::sqdist(c.members[l].vector, q[l]), gamma);
          F.push_back(-(gamma > 0 ? 1.0 : -1.0) * s);
        }
        CHECK(assign_ccvd(m, q) == oracle::argmax(F));
        const auto d = layered_distances(m, q);
        for (std::size_t k = 0; k < F.size(); ++k) CHECK(d[k] == doctest::Approx(-F[k]).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("a constant layer never changes the assignment") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 300; ++trial) {
      LayeredModel one, two;
      two.layer_count = 2;
      for (ClassId k = 0; k < 5; ++k) {
        auto v = oracle::random_vector(rng, 4);
        one.clusters.push_back(cluster(k, {v}));
        // every class shares the same second-layer center
        two.clusters.push_back(cluster(k, {v, {1, 2}}));
      }
      const auto z = oracle::random_vector(rng, 4);
      const std::vector<FeatureVector> q1{z}, q2{z, oracle::random_vector(rng, 2)};
      CHECK(assign_ccvd(one, q1) == assign_ccvd(two, q2));
    }
  }

  TEST_CASE("ties go to the lowest class id") {
    LayeredModel m;
    m.clusters.push_back(cluster(7, {{1, 0}}));
    m.clusters.push_back(cluster(3, {{-1, 0}}));
    CHECK(assign_ccvd(m, std::vector<FeatureVector>{{0, 0}}) == 3);
  }

  TEST_CASE("layout validation") {
    LayeredModel m;
    m.gamma = 0;
    m.clusters.push_back(cluster(0, {{1}}));
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m.gamma = 1;
    m.layer_count = 2;
    CHECK_THROWS_AS(m.validate(), DataError);
    CHECK_THROWS_AS(assign_ccvd(LayeredModel{}, std::vector<FeatureVector>{{0}}), DataError);
  }
}
