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

#pragma once

#include "agritwin/core/types.hpp"

namespace agritwin
{
  /// True when the ring is explicitly closed (first point repeated last) and
  /// has at least three distinct vertices.
  bool isClosedRing(const GeoPolygon &polygon);

  /// True when no two non-adjacent edges of the closed ring intersect.
  bool isSimpleRing(const GeoPolygon &polygon);

  /// Signed shoelace area in coordinate units squared (degrees squared for
  /// WGS84 rings). Positive for counter-clockwise rings.
  double shoelaceArea(const GeoPolygon &polygon);

  /// Area-weighted centroid of a closed ring.
  GeoPoint ringCentroid(const GeoPolygon &polygon);

  /// Planar area in hectares using an equirectangular projection anchored at
  /// the ring centroid latitude.
  double areaHectares(const GeoPolygon &polygon);

  /// Full validation for field boundaries: closed, >= 3 distinct vertices,
  /// simple, strictly positive area. Throws Error{InvalidArgument}.
  void validateBoundaryRing(const GeoPolygon &polygon);
}  // namespace agritwin
