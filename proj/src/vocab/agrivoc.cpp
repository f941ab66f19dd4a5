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

#include "agritwin/vocab/agrivoc.hpp"

#include "agritwin/vocab/ids.hpp"

namespace agritwin::vocab
{
  namespace
  {
    nlohmann::json concept_(const char *id, const char *name, const char *definition,
                            const char *datatype, const char *unit)
    {
      return {{"semanticId", id},
              {"preferredName", name},
              {"definition", definition},
              {"datatype", datatype},
              {"canonicalUnit", unit}};
    }
  }  // namespace

  nlohmann::json agrivocSeed()
  {
    using namespace ids;
    return nlohmann::json::array({
      // submodel concepts; the neutral unit "1" marks non-measurements
      concept_(kSmGeographic, "geographic data", "geographic dimension of a field",
               "Text", "1"),
      concept_(kSmEnvironmental, "environmental data",
               "environmental dimension of a field", "Text", "1"),
      concept_(kSmAgronomic, "agronomic data", "agronomic dimension of a field", "Text",
               "1"),
      concept_(kSmInbox, "exchange inbox", "mediator-delivered data", "Text", "1"),
      concept_(kSmWeedwork, "weed work", "weed control capability of a machine", "Text",
               "1"),
      concept_(kSmPlanning, "route planning", "route planning capability", "Text", "1"),
      concept_(kSmFertilizerwork, "fertilizer work",
               "fertilizer application capability of a machine", "Text", "1"),
      concept_(kSmFieldData, "field data export", "field data held by a farm system",
               "Text", "1"),
      concept_(kSmRecommendation, "recommendation", "advisory outputs of a service",
               "Text", "1"),

      concept_(kFieldBoundaries, "field boundaries",
               "closed WGS84 ring around the field", "GeoPolygon", "deg"),
      concept_(kFieldSlope, "terrain slope", "average terrain slope of the field",
               "Decimal", "%"),
      concept_(kWeatherObservations, "weather observations",
               "observed air temperature series", "Series", "Cel"),
      concept_(kWeatherForecast, "weather forecast", "forecast air temperature series",
               "Series", "Cel"),
      concept_(kSoilNitrogen, "soil nitrogen", "plant-available nitrogen in the topsoil",
               "Decimal", "kg/ha"),
      concept_(kPlantHealthIndex, "plant health index",
               "normalized plant vitality index in [0,1]", "Decimal", "1"),
      concept_(kCropType, "crop type", "crop currently grown on the field", "Text", "1"),
      concept_(kWeedDensity, "weed density", "weeds per square meter", "Decimal",
               "1/m2"),
      concept_(kWorkHistory, "work history", "chronological record of completed jobs",
               "Series", "1"),

      concept_(kRobotTankLevel, "tank level", "remaining liquid in the machine tank",
               "Decimal", "L"),
      concept_(kRobotSpeed, "ground speed", "machine ground speed", "Decimal", "m/s"),
      concept_(kRobotStatus, "machine status", "operating state of the machine", "Text",
               "1"),
      concept_(kRecommendationNitrogen, "nitrogen recommendation",
               "recommended additional nitrogen", "Decimal", "kg/ha"),

      concept_(kOpExecuteJob, "execute job", "run one field job along a route", "Text",
               "1"),
      concept_(kOpPlanRoute, "plan route", "compute a route covering a field", "Text",
               "1"),
      concept_(kOpApplyFertilizer, "apply fertilizer",
               "spread fertilizer over the field", "Text", "1"),
      concept_(kOpSetTarget, "set target", "raise a target value on the field twin",
               "Text", "1"),
      concept_(kOpRecordWork, "record work", "store a completed job record", "Text",
               "1"),
    });
  }

  std::shared_ptr<Vocabulary> agrivoc()
  {
    return std::make_shared<Vocabulary>(Vocabulary::fromJson(agrivocSeed()));
  }
}  // namespace agritwin::vocab
