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

#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "agritwin/hub/twin_hub.hpp"

namespace agritwin::field
{
  enum class ProcessKind
  {
    WeedControl,
    Fertilization
  };

  const char *toString(ProcessKind kind);
  ProcessKind processKindFromString(const std::string &name);

  /// The work record an agricultural process emits for the farmer.
  struct JobRecord
  {
    std::string jobId;
    TwinId fieldId;
    ProcessKind processKind = ProcessKind::WeedControl;
    TwinId executedBy;
    Timestamp startedAt;
    Timestamp finishedAt;
    double coveredAreaHa = 0.0;
    std::map<std::string, nlohmann::json> outputs;  // semanticId -> plain value

    /// Throws Error{InvalidArgument} on violated invariants.
    void validate() const;
  };

  nlohmann::json toJson(const JobRecord &record);
  JobRecord jobRecordFromJson(const nlohmann::json &value);

  /// Record comparison form: identity, executor, and clock fields removed.
  nlohmann::json normalizedRecordJson(const JobRecord &record);

  struct ProcessTrigger
  {
    std::string triggerId;
    ProcessKind processKind = ProcessKind::Fertilization;
    TwinId fieldId;
    SemanticId targetSemanticId;
    double targetValue = 0.0;
    Timestamp issuedAt;
  };

  nlohmann::json toJson(const ProcessTrigger &trigger);
  ProcessTrigger processTriggerFromJson(const nlohmann::json &value);

  /// Seed file content of one field: {id, boundaries, slopePercent, crop,
  /// initialNitrogenKgHa, ...}.
  struct FieldSeed
  {
    TwinId id;
    GeoPolygon boundaries;
    double slopePercent = 0.0;
    std::string crop;
    double initialNitrogenKgHa = 0.0;
    double initialWeedDensity = 1.5;
    double initialPlantHealth = 0.9;
  };

  FieldSeed fieldSeedFromJson(const nlohmann::json &value);
  FieldSeed fieldSeedFromFile(const std::string &path);
  nlohmann::json toJson(const FieldSeed &seed);

  /// The standard digital field twin model: geographic, environmental and
  /// agronomic submodels plus the setTarget/recordWork operations.
  TwinShell buildFieldShell(const FieldSeed &seed, Timestamp at,
                            const vocab::Vocabulary *vocabulary = nullptr);

  struct ReadEntry
  {
    bool found = false;
    TypedValue value;
    Timestamp lastUpdated;
  };

  /// Field twin content service: sensor ingestion, reads, work-record
  /// write-back, and target-triggered processes against twins hosted on a hub.
  class FieldTwinService
  {
  public:
    using TriggerSink = std::function<void(const ProcessTrigger &)>;

    FieldTwinService(hub::TwinHub &hub, std::function<Timestamp()> now);

    void setTriggerSink(TriggerSink sink);

    /// Hosts the field twin and binds its operations. Returns the endpoint.
    std::string hostField(const FieldSeed &seed);

    /// Re-binds operations and validators on an already hosted twin, e.g.
    /// after the hub restored it from its snapshot log.
    void attach(const TwinId &fieldId);
    void attachAll();

    /// Vocabulary-validated write with the currentness policy. Returns false
    /// for stale readings. Throws Error{TwinUnavailable |
    /// UnresolvableSemanticId | DatatypeMismatch | UnitViolation}.
    bool ingestSensorReading(const TwinId &fieldId, const SemanticId &semanticId,
                             const TypedValue &value, const std::string &unit,
                             Timestamp at);

    /// Missing ids are reported per id, never as a whole-call failure.
    std::map<std::string, ReadEntry> readFieldData(const TwinId &fieldId,
                                                   const std::vector<SemanticId> &ids);

    /// Appends to the work history and maps record outputs onto twin
    /// properties via their semantic ids.
    void recordWork(const TwinId &fieldId, const JobRecord &record);

    /// Emits a ProcessTrigger to the orchestrator.
    /// Throws Error{TargetNotAboveCurrent | UnsupportedTargetConcept}.
    ProcessTrigger setTarget(const TwinId &fieldId, const SemanticId &semanticId,
                             double targetValue);

    TimeSeries workHistory(const TwinId &fieldId);

  private:
    std::shared_ptr<LocalTwin> requireTwin(const TwinId &fieldId);
    std::optional<std::string> resolvePropertyPath(LocalTwin &twin,
                                                   const SemanticId &semanticId);

    hub::TwinHub &m_hub;
    std::function<Timestamp()> m_now;
    TriggerSink m_sink;
    std::atomic<int> m_triggerSeq{0};
  };
}  // namespace agritwin::field
