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

#include "agritwin/core/types.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>

#include "agritwin/core/errors.hpp"

namespace agritwin
{
  const char *toString(TwinKind kind)
  {
    switch (kind)
    {
      case TwinKind::SystemTwin:
        return "SystemTwin";
      case TwinKind::FieldTwin:
        return "FieldTwin";
    }
    return "SystemTwin";
  }

  TwinKind twinKindFromString(const std::string &name)
  {
    if (name == "SystemTwin")
      return TwinKind::SystemTwin;
    if (name == "FieldTwin")
      return TwinKind::FieldTwin;
    throw Error(ErrorCode::ParseError, "unknown twin kind '" + name + "'");
  }

  const char *toString(Datatype type)
  {
    switch (type)
    {
      case Datatype::Decimal:
        return "Decimal";
      case Datatype::Integer:
        return "Integer";
      case Datatype::Text:
        return "Text";
      case Datatype::Boolean:
        return "Boolean";
      case Datatype::GeoPolygon:
        return "GeoPolygon";
      case Datatype::Series:
        return "Series";
    }
    return "Decimal";
  }

  Datatype datatypeFromString(const std::string &name)
  {
    if (name == "Decimal")
      return Datatype::Decimal;
    if (name == "Integer")
      return Datatype::Integer;
    if (name == "Text")
      return Datatype::Text;
    if (name == "Boolean")
      return Datatype::Boolean;
    if (name == "GeoPolygon")
      return Datatype::GeoPolygon;
    if (name == "Series")
      return Datatype::Series;
    throw Error(ErrorCode::ParseError, "unknown datatype '" + name + "'");
  }

  Datatype datatypeOf(const TypedValue &value)
  {
    switch (value.index())
    {
      case 0:
        return Datatype::Decimal;
      case 1:
        return Datatype::Integer;
      case 2:
        return Datatype::Text;
      case 3:
        return Datatype::Boolean;
      case 4:
        return Datatype::GeoPolygon;
      default:
        return Datatype::Series;
    }
  }

  std::string Timestamp::toIso8601() const
  {
    std::time_t seconds = static_cast<std::time_t>(m_millis / 1000);
    int millis = static_cast<int>(m_millis % 1000);
    if (millis < 0)
    {
      millis += 1000;
      seconds -= 1;
    }

    std::tm parts{};
    gmtime_r(&seconds, &parts);

    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                  parts.tm_year + 1900, parts.tm_mon + 1, parts.tm_mday, parts.tm_hour,
                  parts.tm_min, parts.tm_sec, millis);
    return buffer;
  }

  Timestamp Timestamp::parse(const std::string &iso8601)
  {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0, millis = 0;
    char zone = 0;

    int matched = std::sscanf(iso8601.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c", &year,
                              &month, &day, &hour, &minute, &second, &millis, &zone);
    if (matched < 8 || zone != 'Z')
    {
      millis = 0;
      matched = std::sscanf(iso8601.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &year, &month,
                            &day, &hour, &minute, &second, &zone);
      if (matched != 7 || zone != 'Z')
        throw Error(ErrorCode::ParseError, "bad ISO-8601 UTC timestamp '" + iso8601 + "'");
    }

    std::tm parts{};
    parts.tm_year = year - 1900;
    parts.tm_mon = month - 1;
    parts.tm_mday = day;
    parts.tm_hour = hour;
    parts.tm_min = minute;
    parts.tm_sec = second;

    std::time_t seconds = timegm(&parts);
    return Timestamp::fromMillis(static_cast<std::int64_t>(seconds) * 1000 + millis);
  }
}  // namespace agritwin
