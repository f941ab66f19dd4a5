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

#include "agritwin/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "agritwin/core/errors.hpp"

namespace agritwin
{
  namespace
  {
    constexpr double kMetersPerDegreeLat = 111320.0;
    constexpr double kPi = 3.14159265358979323846;

    double cross(const GeoPoint &o, const GeoPoint &a, const GeoPoint &b)
    {
      return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
    }

    bool onSegment(const GeoPoint &p, const GeoPoint &q, const GeoPoint &r)
    {
      return std::min(p.lon, r.lon) <= q.lon && q.lon <= std::max(p.lon, r.lon) &&
             std::min(p.lat, r.lat) <= q.lat && q.lat <= std::max(p.lat, r.lat);
    }

    bool segmentsIntersect(const GeoPoint &p1, const GeoPoint &p2, const GeoPoint &q1,
                           const GeoPoint &q2)
    {
      double d1 = cross(q1, q2, p1);
      double d2 = cross(q1, q2, p2);
      double d3 = cross(p1, p2, q1);
      double d4 = cross(p1, p2, q2);

      if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
          ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;

      if (d1 == 0 && onSegment(q1, p1, q2))
        return true;
      if (d2 == 0 && onSegment(q1, p2, q2))
        return true;
      if (d3 == 0 && onSegment(p1, q1, p2))
        return true;
      if (d4 == 0 && onSegment(p1, q2, p2))
        return true;
      return false;
    }
  }  // namespace

  bool isClosedRing(const GeoPolygon &polygon)
  {
    const auto &pts = polygon.points;
    if (pts.size() < 4)
      return false;
    if (!(pts.front() == pts.back()))
      return false;

    std::set<std::pair<double, double>> distinct;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      distinct.insert({pts[i].lon, pts[i].lat});
    return distinct.size() >= 3;
  }

  bool isSimpleRing(const GeoPolygon &polygon)
  {
    const auto &pts = polygon.points;
    std::size_t n = pts.size() - 1;  // edges of the closed ring
    for (std::size_t i = 0; i < n; ++i)
    {
      for (std::size_t j = i + 1; j < n; ++j)
      {
        // skip adjacent edges (shared endpoint), including the wrap pair
        if (j == i + 1 || (i == 0 && j == n - 1))
          continue;
        if (segmentsIntersect(pts[i], pts[i + 1], pts[j], pts[j + 1]))
          return false;
      }
    }
    return true;
  }

  double shoelaceArea(const GeoPolygon &polygon)
  {
    const auto &pts = polygon.points;
    if (pts.size() < 3)
      return 0.0;

    double twiceArea = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      twiceArea += pts[i].lon * pts[i + 1].lat - pts[i + 1].lon * pts[i].lat;
    return twiceArea / 2.0;
  }

  GeoPoint ringCentroid(const GeoPolygon &polygon)
  {
    const auto &pts = polygon.points;
    double area = shoelaceArea(polygon);
    if (area == 0.0)
      throw Error(ErrorCode::InvalidArgument, "degenerate ring has no centroid");

    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    {
      double w = pts[i].lon * pts[i + 1].lat - pts[i + 1].lon * pts[i].lat;
      cx += (pts[i].lon + pts[i + 1].lon) * w;
      cy += (pts[i].lat + pts[i + 1].lat) * w;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
  }

  double areaHectares(const GeoPolygon &polygon)
  {
    GeoPoint c = ringCentroid(polygon);
    double metersPerDegreeLon = kMetersPerDegreeLat * std::cos(c.lat * kPi / 180.0);

    // translating to a local origin keeps the shoelace sum well conditioned
    const GeoPoint &origin = polygon.points.front();
    GeoPolygon projected;
    projected.points.reserve(polygon.points.size());
    for (const auto &p : polygon.points)
      projected.points.push_back({(p.lon - origin.lon) * metersPerDegreeLon,
                                  (p.lat - origin.lat) * kMetersPerDegreeLat});

    return std::abs(shoelaceArea(projected)) / 10000.0;
  }

  void validateBoundaryRing(const GeoPolygon &polygon)
  {
    if (!isClosedRing(polygon))
      throw Error(ErrorCode::InvalidArgument,
                  "boundaries must be a closed ring with >= 3 distinct vertices");
    if (!isSimpleRing(polygon))
      throw Error(ErrorCode::InvalidArgument, "boundaries must not self-intersect");
    if (std::abs(shoelaceArea(polygon)) <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "boundaries enclose no area");
  }
}  // namespace agritwin
