// Copyright 2026 The GANN Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "gann/core.hpp"
#include "testutil.hpp"

using namespace gann;

TEST_CASE("euclidean: 3-4-5 triangle") {
  DistCounter c;
  const std::vector<float> a{0.0f, 0.0f}, b{3.0f, 4.0f};
  CHECK(euclidean(a, b, c) == doctest::Approx(5.0).epsilon(1e-7));
  CHECK(c.count == 1);
  CHECK(squared_euclidean(a, b, c) == doctest::Approx(25.0).epsilon(1e-7));
  CHECK(c.count == 2);
}

TEST_CASE("euclidean: identical vectors have distance zero") {
  DistCounter c;
  std::mt19937 rng(1);
  std::uniform_real_distribution<float> uni(-10.0f, 10.0f);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<float> x(7);
    for (float& v : x) v = uni(rng);
    CHECK(euclidean(x, x, c) == 0.0f);
    CHECK(squared_euclidean(x, x, c) == 0.0f);
  }
}

TEST_CASE("euclidean: matches an independent scalar loop") {
  DistCounter c;
  std::mt19937 rng(42);
  std::uniform_real_distribution<float> uni(-1.0f, 1.0f);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<float> a(8), b(8);
    for (float& v : a) v = uni(rng);
    for (float& v : b) v = uni(rng);
    double expect = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double diff = static_cast<double>(a[j]) - static_cast<double>(b[j]);
      expect += diff * diff;
    }
    expect = std::sqrt(expect);
    CHECK(euclidean(a, b, c) == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("euclidean: odd dimensions hit the scalar tail") {
  DistCounter c;
  for (std::size_t d : {1u, 3u, 5u, 9u, 13u, 17u, 31u}) {
    std::vector<float> a(d, 1.0f), b(d, 2.0f);
    CHECK(squared_euclidean(a, b, c) ==
          doctest::Approx(static_cast<double>(d)).epsilon(1e-6));
  }
}

TEST_CASE("euclidean: dimension mismatch is a caller bug") {
  DistCounter c;
  const std::vector<float> a{1.0f, 2.0f}, b{1.0f, 2.0f, 3.0f};
  CHECK_THROWS_AS(euclidean(a, b, c), std::invalid_argument);
  CHECK_THROWS_AS(squared_euclidean(a, b, c), std::invalid_argument);
  CHECK(c.count == 0);
}

TEST_CASE("euclidean: symmetry and triangle inequality on random triples") {
  DistCounter c;
  std::mt19937 rng(7);
  std::uniform_real_distribution<float> uni(-5.0f, 5.0f);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<float> a(6), b(6), x(6);
    for (float& v : a) v = uni(rng);
    for (float& v : b) v = uni(rng);
    for (float& v : x) v = uni(rng);
    const float ab = euclidean(a, b, c);
    const float ba = euclidean(b, a, c);
    CHECK(ab == ba);
    const float ax = euclidean(a, x, c);
    const float xb = euclidean(x, b, c);
    CHECK(ab <= (ax + xb) * (1.0f + 1e-5f));
  }
}

TEST_CASE("squared distance induces the same order as true distance") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<float> uni(0.0f, 1.0f);
  DistCounter c;
  std::vector<float> q(5);
  for (float& v : q) v = uni(rng);
  std::vector<std::vector<float>> pts(10, std::vector<float>(5));
  for (auto& p : pts) {
    for (float& v : p) v = uni(rng);
  }
  std::vector<int> by_true(10), by_squared(10);
  for (int i = 0; i < 10; ++i) by_true[i] = by_squared[i] = i;
  std::sort(by_true.begin(), by_true.end(), [&](int i, int j) {
    return euclidean(q, pts[i], c) < euclidean(q, pts[j], c);
  });
  std::sort(by_squared.begin(), by_squared.end(), [&](int i, int j) {
    return squared_euclidean(q, pts[i], c) < squared_euclidean(q, pts[j], c);
  });
  CHECK(by_true == by_squared);
}

TEST_CASE("DistCounter: exact accumulation and reset") {
  DistCounter c;
  const std::vector<float> a{0.0f}, b{1.0f};
  for (int i = 0; i < 17; ++i) euclidean(a, b, c);
  CHECK(c.count == 17);
  c.reset();
  CHECK(c.count == 0);
}

TEST_CASE("candidate_less breaks distance ties by node id") {
  CHECK(candidate_less({3, 1.0f}, {5, 1.0f}));
  CHECK_FALSE(candidate_less({5, 1.0f}, {3, 1.0f}));
  CHECK(candidate_less({9, 0.5f}, {1, 1.0f}));
}
