//
// Copyright 2025-2026 The AgriTwin Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.
//

#include <doctest.h>

#include <random>

#include "agritwin/core/geometry.hpp"
#include "agritwin/sim/world.hpp"
#include "oracles.hpp"

using namespace agritwin;

namespace
{
  GeoPolygon randomConvexRing(std::mt19937 &rng)
  {
    // random radii around a random center give a star-convex simple ring
    std::uniform_real_distribution<double> lon(7.0, 8.0);
    std::uniform_real_distribution<double> lat(49.0, 50.0);
    std::uniform_real_distribution<double> radius(0.001, 0.01);
    std::uniform_int_distribution<int> corners(3, 9);

    double cx = lon(rng), cy = lat(rng);
    int n = corners(rng);
    GeoPolygon ring;
    for (int i = 0; i < n; ++i)
    {
      double angle = 2.0 * 3.14159265358979323846 * i / n;
      double r = radius(rng);
      ring.points.push_back({cx + r * std::cos(angle), cy + r * std::sin(angle)});
    }
    ring.points.push_back(ring.points.front());
    return ring;
  }
}  // namespace

TEST_CASE("shoelace area and centroid agree with the triangle-fan oracle")
{
  std::mt19937 rng(101);
  for (int i = 0; i < 100; ++i)
  {
    GeoPolygon ring = randomConvexRing(rng);
    REQUIRE(shoelaceArea(ring) == doctest::Approx(oracles::fanArea(ring)).epsilon(1e-12));

    GeoPoint centroid = ringCentroid(ring);
    GeoPoint oracle = oracles::fanCentroid(ring);
    REQUIRE(centroid.lon == doctest::Approx(oracle.lon).epsilon(1e-9));
    REQUIRE(centroid.lat == doctest::Approx(oracle.lat).epsilon(1e-9));

    // the oracle projects at raw coordinates; its own rounding dominates
    REQUIRE(areaHectares(ring) ==
            doctest::Approx(oracles::fanAreaHectares(ring)).epsilon(1e-6));
  }
}

TEST_CASE("all seeded fields have strictly positive area")
{
  for (const auto &seed : {sim::field7Seed(), sim::field8Seed(), sim::field9Seed()})
  {
    CHECK(std::abs(shoelaceArea(seed.boundaries)) > 0.0);
    CHECK(oracles::fanAreaHectares(seed.boundaries) > 0.0);
    CHECK_NOTHROW(validateBoundaryRing(seed.boundaries));
  }
}

TEST_CASE("ring validation catches malformed boundaries")
{
  GeoPolygon open{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  CHECK_FALSE(isClosedRing(open));
  CHECK_THROWS_AS(validateBoundaryRing(open), Error);

  GeoPolygon twoVertex{{{0, 0}, {1, 0}, {0, 0}}};
  CHECK_FALSE(isClosedRing(twoVertex));

  GeoPolygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}, {0, 0}}};
  CHECK(isClosedRing(bowtie));
  CHECK_FALSE(isSimpleRing(bowtie));
  CHECK_THROWS_AS(validateBoundaryRing(bowtie), Error);

  GeoPolygon square{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}};
  CHECK(isClosedRing(square));
  CHECK(isSimpleRing(square));
  CHECK_NOTHROW(validateBoundaryRing(square));
  CHECK(shoelaceArea(square) == doctest::Approx(1.0));
}
