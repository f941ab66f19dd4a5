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

namespace agritwin::ids
{
  // Submodel concepts
  inline constexpr const char *kSmGeographic = "urn:agrivoc:sm.geographic";
  inline constexpr const char *kSmEnvironmental = "urn:agrivoc:sm.environmental";
  inline constexpr const char *kSmAgronomic = "urn:agrivoc:sm.agronomic";
  inline constexpr const char *kSmInbox = "urn:agrivoc:sm.inbox";
  inline constexpr const char *kSmWeedwork = "urn:agrivoc:sm.weedwork";
  inline constexpr const char *kSmPlanning = "urn:agrivoc:sm.planning";
  inline constexpr const char *kSmFertilizerwork = "urn:agrivoc:sm.fertilizerwork";
  inline constexpr const char *kSmFieldData = "urn:agrivoc:sm.fielddata";
  inline constexpr const char *kSmRecommendation = "urn:agrivoc:sm.recommendation";

  // Field data concepts
  inline constexpr const char *kFieldBoundaries = "urn:agrivoc:field.boundaries";
  inline constexpr const char *kFieldSlope = "urn:agrivoc:field.slope";
  inline constexpr const char *kWeatherObservations = "urn:agrivoc:weather.observations";
  inline constexpr const char *kWeatherForecast = "urn:agrivoc:weather.forecast";
  inline constexpr const char *kSoilNitrogen = "urn:agrivoc:soil.nitrogen";
  inline constexpr const char *kPlantHealthIndex = "urn:agrivoc:plant.healthIndex";
  inline constexpr const char *kCropType = "urn:agrivoc:crop.type";
  inline constexpr const char *kWeedDensity = "urn:agrivoc:weed.density";
  inline constexpr const char *kWorkHistory = "urn:agrivoc:work.history";

  // System twin concepts
  inline constexpr const char *kRobotTankLevel = "urn:agrivoc:robot.tankLevel";
  inline constexpr const char *kRobotSpeed = "urn:agrivoc:robot.speed";
  inline constexpr const char *kRobotStatus = "urn:agrivoc:robot.status";
  inline constexpr const char *kRecommendationNitrogen =
    "urn:agrivoc:recommendation.nitrogen";

  // Operation concepts
  inline constexpr const char *kOpExecuteJob = "urn:agrivoc:op.executeJob";
  inline constexpr const char *kOpPlanRoute = "urn:agrivoc:op.planRoute";
  inline constexpr const char *kOpApplyFertilizer = "urn:agrivoc:op.applyFertilizer";
  inline constexpr const char *kOpSetTarget = "urn:agrivoc:op.setTarget";
  inline constexpr const char *kOpRecordWork = "urn:agrivoc:op.recordWork";
}  // namespace agritwin::ids
