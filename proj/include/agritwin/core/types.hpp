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

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace agritwin
{
  /// URI-form identifier of a twin, e.g. "urn:agritwin:field:field-7".
  struct TwinId
  {
    std::string value;

    TwinId() = default;
    explicit TwinId(std::string v) : value(std::move(v)) {}

    bool empty() const { return value.empty(); }
    auto operator<=>(const TwinId &) const = default;
  };

  /// URI-form reference into the shared vocabulary, e.g. "urn:agrivoc:soil.nitrogen".
  struct SemanticId
  {
    std::string value;

    SemanticId() = default;
    explicit SemanticId(std::string v) : value(std::move(v)) {}

    bool empty() const { return value.empty(); }
    auto operator<=>(const SemanticId &) const = default;
  };

  enum class TwinKind
  {
    SystemTwin,
    FieldTwin
  };

  enum class Datatype
  {
    Decimal,
    Integer,
    Text,
    Boolean,
    GeoPolygon,
    Series
  };

  const char *toString(TwinKind kind);
  const char *toString(Datatype type);
  TwinKind twinKindFromString(const std::string &name);
  Datatype datatypeFromString(const std::string &name);

  /// Milliseconds since the Unix epoch, UTC. Wire format is ISO-8601.
  class Timestamp
  {
  public:
    Timestamp() = default;

    static Timestamp fromMillis(std::int64_t millis)
    {
      Timestamp t;
      t.m_millis = millis;
      return t;
    }

    static Timestamp parse(const std::string &iso8601);

    std::int64_t millis() const { return m_millis; }
    std::string toIso8601() const;

    auto operator<=>(const Timestamp &) const = default;

  private:
    std::int64_t m_millis = 0;
  };

  struct GeoPoint
  {
    double lon = 0.0;
    double lat = 0.0;

    bool operator==(const GeoPoint &) const = default;
  };

  /// A sequence of WGS84 points. Field boundaries are stored as a closed ring
  /// (first point repeated last); routes reuse the same carrier as open paths.
  struct GeoPolygon
  {
    std::vector<GeoPoint> points;

    bool operator==(const GeoPolygon &) const = default;
  };

  struct SeriesSample
  {
    Timestamp at;
    nlohmann::json value;

    bool operator==(const SeriesSample &) const = default;
  };

  struct TimeSeries
  {
    std::vector<SeriesSample> samples;

    bool operator==(const TimeSeries &) const = default;
  };

  using TypedValue =
    std::variant<double, std::int64_t, std::string, bool, GeoPolygon, TimeSeries>;

  Datatype datatypeOf(const TypedValue &value);

  using ArgMap = std::map<std::string, TypedValue>;
}  // namespace agritwin
