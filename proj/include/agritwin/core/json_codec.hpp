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

#include <json.hpp>

#include "agritwin/core/shell.hpp"
#include "agritwin/core/types.hpp"

namespace agritwin
{
  using json = nlohmann::json;

  // Plain JSON value encodings, interpreted against a known datatype:
  //   Decimal/Integer -> number, Text -> string, Boolean -> bool,
  //   GeoPolygon -> [[lon,lat],...], Series -> [{"at": iso8601, "value": any}].
  json toJson(const TypedValue &value);
  TypedValue typedValueFromJson(const json &value, Datatype datatype);

  json toJson(const GeoPolygon &polygon);
  GeoPolygon geoPolygonFromJson(const json &value);

  json toJson(const TimeSeries &series);
  TimeSeries timeSeriesFromJson(const json &value);

  /// Wire view of one property: {semanticId, datatype, unit, value, lastUpdated}.
  json propertyViewToJson(const PropertyElement &element);

  json toJson(const ParameterSpec &spec);
  ParameterSpec parameterSpecFromJson(const json &value);

  json toJson(const ShellDescriptor &descriptor);
  ShellDescriptor shellDescriptorFromJson(const json &value);

  json toJson(const TwinShell &shell);
  TwinShell twinShellFromJson(const json &value);

  json toJson(const ArgMap &args, const std::vector<ParameterSpec> &signature);
  ArgMap argMapFromJson(const json &value, const std::vector<ParameterSpec> &signature);
}  // namespace agritwin
