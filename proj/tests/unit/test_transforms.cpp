// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "ivoro/error.hpp"
#include "ivoro/geometry.hpp"
#include "ivoro/transforms.hpp"

using namespace ivoro;

TEST_SUITE("transforms") {
  TEST_CASE("l2_normalize") {
    const auto v = l2_normalize(std::vector<double>{3, 4});
    CHECK(v[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(l2_normalize(std::vector<double>{1, 0}) == std::vector<double>{1, 0});
    CHECK_THROWS_AS(l2_normalize(std::vector<double>{0, 0}), DataError);
  }

  TEST_CASE("linear_transform") {
    CHECK(linear_transform(std::vector<double>{1, 2}, 2, 1) == std::vector<double>{3, 5});
    CHECK(linear_transform(std::vector<double>{0.3, -7}, 1, 0) == std::vector<double>{0.3, -7});
    CHECK(linear_transform(std::vector<double>{0, 0}, 5, 0) == std::vector<double>{0, 0});
  }

  TEST_CASE("tukey") {
    CHECK(tukey(std::vector<double>{4, 9}, 0.5, 1e-8) == std::vector<double>{2, 3});
    CHECK(tukey(std::vector<double>{0.25, 7}, 1.0, 1e-8) == std::vector<double>{0.25, 7});
    const auto l = tukey(std::vector<double>{1, std::numbers::e}, 0.0, 1e-8);
    CHECK(l[0] == 0.0);
    CHECK(l[1] == doctest::Approx(1.0).epsilon(1e-15));
    // zero is floored at eps before the log
    CHECK(tukey(std::vector<double>{0}, 0.0, 1e-8)[0] == doctest::Approx(std::log(1e-8)));
    CHECK_THROWS_AS(tukey(std::vector<double>{1, -0.5}, 0.5, 1e-8), DataError);
    const auto c = tukey(std::vector<double>{-0.5}, 0.5, 1e-8, NegativePolicy::clamp);
    CHECK(c[0] == doctest::Approx(std::sqrt(1e-8)));
  }

  TEST_CASE("compose") {
    TransformParams off;
    CHECK(compose(std::vector<double>{3, -4}, off) == std::vector<double>{3, -4});

    TransformParams p{.enabled = true, .scale = 1, .shift = 0, .lambda = 1};
    CHECK(compose(std::vector<double>{3, 4}, p) == l2_normalize(std::vector<double>{3, 4}));

    p.shift = 1;
    p.lambda = 0.5;
    const auto v = compose(std::vector<double>{3, 4}, p);
    CHECK(v[0] == doctest::Approx(std::sqrt(1.6)).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(std::sqrt(1.8)).epsilon(1e-15));
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((TransformParams{.enabled = true, .scale = 0}.validate()), ConfigError);
    CHECK_THROWS_AS((TransformParams{.enabled = true, .epsilon = 0}.validate()), ConfigError);
    CHECK_NOTHROW(TransformParams{}.validate());
  }

  TEST_CASE("monotone on nonnegative scalars") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 10.0), lam(0.1, 2.0);
    for (int i = 0; i < 1000; ++i) {
      double a = u(rng), b = u(rng);
      if (a > b) std::swap(a, b);
      const double l = lam(rng);
      const auto r = tukey(std::vector<double>{a, b}, l, 1e-8);
      CHECK(r[0] <= r[1]);
    }
  }

  TEST_CASE("pre-transforming centers and queries gives one assignment") {
    std::mt19937_64 rng(13);
    TransformParams p{.enabled = true, .scale = 1, .shift = 1, .lambda = 0.5};
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Center> c1, c2;
      std::vector<std::vector<double>> raw;
      for (int k = 0; k < 4; ++k) raw.push_back(oracle::random_vector(rng, 5));
      for (int k = 0; k < 4; ++k) c1.push_back(Center{compose(raw[k], p)});
      for (int k = 3; k >= 0; --k) c2.insert(c2.begin(), Center{compose(raw[k], p)});
      const auto z = compose(oracle::random_vector(rng, 5), p);
      CHECK(assign_cell(z, c1) == assign_cell(z, c2));
    }
  }
}
