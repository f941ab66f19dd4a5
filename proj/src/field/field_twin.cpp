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

#include "agritwin/field/field_twin.hpp"

#include <fstream>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/geometry.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/vocab/ids.hpp"

namespace agritwin::field
{
  const char *toString(ProcessKind kind)
  {
    switch (kind)
    {
      case ProcessKind::WeedControl:
        return "weed-control";
      case ProcessKind::Fertilization:
        return "fertilization";
    }
    return "weed-control";
  }

  ProcessKind processKindFromString(const std::string &name)
  {
    if (name == "weed-control")
      return ProcessKind::WeedControl;
    if (name == "fertilization")
      return ProcessKind::Fertilization;
    throw Error(ErrorCode::ParseError, "unknown process kind '" + name + "'");
  }

  void JobRecord::validate() const
  {
    if (jobId.empty())
      throw Error(ErrorCode::InvalidArgument, "job record lacks a job id");
    if (fieldId.empty() || executedBy.empty())
      throw Error(ErrorCode::InvalidArgument,
                  "job record '" + jobId + "' lacks field or executor id");
    if (finishedAt < startedAt)
      throw Error(ErrorCode::InvalidArgument,
                  "job record '" + jobId + "' finished before it started");
    if (coveredAreaHa < 0.0)
      throw Error(ErrorCode::InvalidArgument,
                  "job record '" + jobId + "' has negative covered area");
  }

  nlohmann::json toJson(const JobRecord &record)
  {
    return {{"jobId", record.jobId},
            {"fieldId", record.fieldId.value},
            {"processKind", toString(record.processKind)},
            {"executedBy", record.executedBy.value},
            {"startedAt", record.startedAt.toIso8601()},
            {"finishedAt", record.finishedAt.toIso8601()},
            {"coveredAreaHa", record.coveredAreaHa},
            {"outputs", record.outputs}};
  }

  JobRecord jobRecordFromJson(const nlohmann::json &value)
  {
    JobRecord record;
    record.jobId = value.at("jobId").get<std::string>();
    record.fieldId = TwinId(value.at("fieldId").get<std::string>());
    record.processKind = processKindFromString(value.at("processKind").get<std::string>());
    record.executedBy = TwinId(value.at("executedBy").get<std::string>());
    record.startedAt = Timestamp::parse(value.at("startedAt").get<std::string>());
    record.finishedAt = Timestamp::parse(value.at("finishedAt").get<std::string>());
    record.coveredAreaHa = value.at("coveredAreaHa").get<double>();
    nlohmann::json outputs = value.value("outputs", nlohmann::json::object());
    for (const auto &[id, output] : outputs.items())
      record.outputs[id] = output;
    return record;
  }

  nlohmann::json normalizedRecordJson(const JobRecord &record)
  {
    return {{"fieldId", record.fieldId.value},
            {"processKind", toString(record.processKind)},
            {"coveredAreaHa", record.coveredAreaHa},
            {"outputs", record.outputs}};
  }

  nlohmann::json toJson(const ProcessTrigger &trigger)
  {
    return {{"triggerId", trigger.triggerId},
            {"processKind", toString(trigger.processKind)},
            {"fieldId", trigger.fieldId.value},
            {"targetSemanticId", trigger.targetSemanticId.value},
            {"targetValue", trigger.targetValue},
            {"issuedAt", trigger.issuedAt.toIso8601()}};
  }

  ProcessTrigger processTriggerFromJson(const nlohmann::json &value)
  {
    ProcessTrigger trigger;
    trigger.triggerId = value.at("triggerId").get<std::string>();
    trigger.processKind = processKindFromString(value.at("processKind").get<std::string>());
    trigger.fieldId = TwinId(value.at("fieldId").get<std::string>());
    trigger.targetSemanticId = SemanticId(value.at("targetSemanticId").get<std::string>());
    trigger.targetValue = value.at("targetValue").get<double>();
    trigger.issuedAt = Timestamp::parse(value.at("issuedAt").get<std::string>());
    return trigger;
  }

  FieldSeed fieldSeedFromJson(const nlohmann::json &value)
  {
    FieldSeed seed;
    seed.id = TwinId(value.at("id").get<std::string>());
    seed.boundaries = geoPolygonFromJson(value.at("boundaries"));
    seed.slopePercent = value.at("slopePercent").get<double>();
    seed.crop = value.at("crop").get<std::string>();
    seed.initialNitrogenKgHa = value.at("initialNitrogenKgHa").get<double>();
    seed.initialWeedDensity = value.value("initialWeedDensity", 1.5);
    seed.initialPlantHealth = value.value("initialPlantHealth", 0.9);
    return seed;
  }

  FieldSeed fieldSeedFromFile(const std::string &path)
  {
    std::ifstream in(path);
    if (!in)
      throw Error(ErrorCode::BadConfig, "cannot open field seed '" + path + "'");
    nlohmann::json value = nlohmann::json::parse(in, nullptr, false);
    if (value.is_discarded())
      throw Error(ErrorCode::ParseError, "field seed '" + path + "' is not JSON");
    return fieldSeedFromJson(value);
  }

  nlohmann::json toJson(const FieldSeed &seed)
  {
    return {{"id", seed.id.value},
            {"boundaries", toJson(seed.boundaries)},
            {"slopePercent", seed.slopePercent},
            {"crop", seed.crop},
            {"initialNitrogenKgHa", seed.initialNitrogenKgHa},
            {"initialWeedDensity", seed.initialWeedDensity},
            {"initialPlantHealth", seed.initialPlantHealth}};
  }

  namespace
  {
    TimeSeries staticForecast()
    {
      TimeSeries series;
      const std::pair<const char *, double> samples[] = {
        {"2026-04-01T06:00:00.000Z", 6.5},
        {"2026-04-01T12:00:00.000Z", 14.0},
        {"2026-04-02T06:00:00.000Z", 7.0},
        {"2026-04-02T12:00:00.000Z", 15.5},
      };
      for (const auto &[at, temperature] : samples)
        series.samples.push_back({Timestamp::parse(at), temperature});
      return series;
    }

    TimeSeries staticObservations()
    {
      TimeSeries series;
      const std::pair<const char *, double> samples[] = {
        {"2026-03-30T06:00:00.000Z", 3.8},
        {"2026-03-30T12:00:00.000Z", 12.2},
        {"2026-03-31T06:00:00.000Z", 4.4},
      };
      for (const auto &[at, temperature] : samples)
        series.samples.push_back({Timestamp::parse(at), temperature});
      return series;
    }
  }  // namespace

  TwinShell buildFieldShell(const FieldSeed &seed, Timestamp at,
                            const vocab::Vocabulary *vocabulary)
  {
    validateBoundaryRing(seed.boundaries);
    if (seed.initialNitrogenKgHa < 0.0)
      throw Error(ErrorCode::InvalidArgument, "initial nitrogen must be >= 0");
    if (seed.initialPlantHealth < 0.0 || seed.initialPlantHealth > 1.0)
      throw Error(ErrorCode::InvalidArgument, "plant health index must be in [0,1]");

    using namespace ids;

    Submodel geographic{"geographic", SemanticId(kSmGeographic), {}};
    geographic.elements.push_back(PropertyElement{
      "boundaries", SemanticId(kFieldBoundaries), Datatype::GeoPolygon, "deg",
      seed.boundaries, at});
    geographic.elements.push_back(PropertyElement{
      "slopePercent", SemanticId(kFieldSlope), Datatype::Decimal, "%",
      seed.slopePercent, at});

    Submodel environmental{"environmental", SemanticId(kSmEnvironmental), {}};
    environmental.elements.push_back(PropertyElement{
      "weatherObservations", SemanticId(kWeatherObservations), Datatype::Series, "Cel",
      staticObservations(), at});
    environmental.elements.push_back(PropertyElement{
      "weatherForecast", SemanticId(kWeatherForecast), Datatype::Series, "Cel",
      staticForecast(), at});

    Submodel agronomic{"agronomic", SemanticId(kSmAgronomic), {}};
    agronomic.elements.push_back(PropertyElement{
      "soilNitrogen", SemanticId(kSoilNitrogen), Datatype::Decimal, "kg/ha",
      seed.initialNitrogenKgHa, at});
    agronomic.elements.push_back(PropertyElement{
      "plantHealthIndex", SemanticId(kPlantHealthIndex), Datatype::Decimal, "1",
      seed.initialPlantHealth, at});
    agronomic.elements.push_back(PropertyElement{
      "cropType", SemanticId(kCropType), Datatype::Text, "1", seed.crop, at});
    agronomic.elements.push_back(PropertyElement{
      "weedDensity", SemanticId(kWeedDensity), Datatype::Decimal, "1/m2",
      seed.initialWeedDensity, at});
    agronomic.elements.push_back(PropertyElement{
      "workHistory", SemanticId(kWorkHistory), Datatype::Series, "1", TimeSeries{}, at});
    agronomic.elements.push_back(OperationElement{
      "setTarget",
      SemanticId(kOpSetTarget),
      {{"semanticId", Datatype::Text, "1"}, {"targetValue", Datatype::Decimal, "1"}},
      {{"trigger", Datatype::Text, "1"}}});
    agronomic.elements.push_back(OperationElement{
      "recordWork",
      SemanticId(kOpRecordWork),
      {{"record", Datatype::Text, "1"}},
      {{"accepted", Datatype::Boolean, "1"}}});

    return createShell(seed.id, TwinKind::FieldTwin,
                       {std::move(geographic), std::move(environmental),
                        std::move(agronomic)},
                       vocabulary);
  }

  FieldTwinService::FieldTwinService(hub::TwinHub &hub, std::function<Timestamp()> now)
    : m_hub(hub), m_now(std::move(now))
  {
    if (!m_now)
      m_now = [this] { return m_hub.now(); };
  }

  void FieldTwinService::setTriggerSink(TriggerSink sink) { m_sink = std::move(sink); }

  std::string FieldTwinService::hostField(const FieldSeed &seed)
  {
    TwinShell shell = buildFieldShell(seed, m_now(), m_hub.vocabulary().get());
    std::string endpoint = m_hub.hostFieldTwin(std::move(shell));
    attach(seed.id);
    return endpoint;
  }

  void FieldTwinService::attach(const TwinId &fieldId)
  {
    auto twin = m_hub.hostedTwin(fieldId);

    twin->addWriteValidator([](const std::string &path, const TypedValue &value) {
      const auto *number = std::get_if<double>(&value);
      if (!number)
        return;
      auto slash = path.find('/');
      std::string element = slash == std::string::npos ? path : path.substr(slash + 1);
      if (element == "plantHealthIndex" && (*number < 0.0 || *number > 1.0))
        throw Error(ErrorCode::InvalidArgument, "plant health index must be in [0,1]");
      if ((element == "soilNitrogen" || element == "weedDensity") && *number < 0.0)
        throw Error(ErrorCode::InvalidArgument, "'" + path + "' must be >= 0");
    });

    twin->bindOperation("agronomic/setTarget", [this, fieldId](const ArgMap &args) {
      ProcessTrigger trigger =
        setTarget(fieldId, SemanticId(std::get<std::string>(args.at("semanticId"))),
                  std::get<double>(args.at("targetValue")));
      return ArgMap{{"trigger", toJson(trigger).dump()}};
    });

    twin->bindOperation("agronomic/recordWork", [this, fieldId](const ArgMap &args) {
      JobRecord record = jobRecordFromJson(
        nlohmann::json::parse(std::get<std::string>(args.at("record"))));
      recordWork(fieldId, record);
      return ArgMap{{"accepted", true}};
    });
  }

  void FieldTwinService::attachAll()
  {
    for (const TwinId &id : m_hub.hostedTwinIds())
      attach(id);
  }

  std::shared_ptr<LocalTwin> FieldTwinService::requireTwin(const TwinId &fieldId)
  {
    return m_hub.hostedTwin(fieldId);  // throws TwinUnavailable
  }

  std::optional<std::string> FieldTwinService::resolvePropertyPath(
    LocalTwin &twin, const SemanticId &semanticId)
  {
    for (const auto &path : resolveBySemanticId(twin.describe(), semanticId))
    {
      try
      {
        twin.readProperty(path);
        return path;
      }
      catch (const Error &)
      {
        // an operation path; keep looking
      }
    }
    return std::nullopt;
  }

  bool FieldTwinService::ingestSensorReading(const TwinId &fieldId,
                                             const SemanticId &semanticId,
                                             const TypedValue &value,
                                             const std::string &unit, Timestamp at)
  {
    auto twin = requireTwin(fieldId);

    switch (m_hub.vocabulary()->validateValue(semanticId, value, unit))
    {
      case vocab::Violation::Ok:
        break;
      case vocab::Violation::UnknownConcept:
        throw Error(ErrorCode::UnresolvableSemanticId,
                    "'" + semanticId.value + "' does not resolve in the vocabulary");
      case vocab::Violation::DatatypeViolation:
        throw Error(ErrorCode::DatatypeMismatch,
                    "reading for '" + semanticId.value + "' has the wrong datatype");
      case vocab::Violation::UnitViolation:
        throw Error(ErrorCode::UnitViolation,
                    "reading for '" + semanticId.value + "' must use the canonical unit '" +
                      m_hub.vocabulary()->lookup(semanticId).canonicalUnit + "', got '" +
                      unit + "'");
    }

    auto path = resolvePropertyPath(*twin, semanticId);
    if (!path)
      throw Error(ErrorCode::UnresolvableSemanticId,
                  "twin '" + fieldId.value + "' has no property for '" +
                    semanticId.value + "'");
    return twin->writeProperty(*path, value, at);
  }

  std::map<std::string, ReadEntry> FieldTwinService::readFieldData(
    const TwinId &fieldId, const std::vector<SemanticId> &ids)
  {
    auto twin = requireTwin(fieldId);

    std::map<std::string, ReadEntry> out;
    for (const SemanticId &id : ids)
    {
      ReadEntry entry;
      if (auto path = resolvePropertyPath(*twin, id))
      {
        PropertyElement element = twin->readProperty(*path);
        entry.found = true;
        entry.value = element.value;
        entry.lastUpdated = element.lastUpdated;
      }
      out[id.value] = std::move(entry);
    }
    return out;
  }

  void FieldTwinService::recordWork(const TwinId &fieldId, const JobRecord &record)
  {
    record.validate();
    auto twin = requireTwin(fieldId);

    const auto vocabulary = m_hub.vocabulary();
    for (const auto &[outputId, outputValue] : record.outputs)
      if (!vocabulary->contains(SemanticId(outputId)))
        throw Error(ErrorCode::UnresolvableSemanticId,
                    "record output '" + outputId + "' does not resolve in the vocabulary");

    if (!twin->appendToSeries(joinPath("agronomic", "workHistory"),
                              {record.finishedAt, toJson(record)}))
      throw Error(ErrorCode::InvalidArgument,
                  "record '" + record.jobId + "' predates the work history tail");

    for (const auto &[outputId, outputValue] : record.outputs)
    {
      SemanticId semanticId(outputId);
      Datatype datatype = vocabulary->lookup(semanticId).datatype;
      if (auto path = resolvePropertyPath(*twin, semanticId))
        twin->writeProperty(*path, typedValueFromJson(outputValue, datatype),
                            record.finishedAt);
    }
  }

  ProcessTrigger FieldTwinService::setTarget(const TwinId &fieldId,
                                             const SemanticId &semanticId,
                                             double targetValue)
  {
    auto twin = requireTwin(fieldId);

    if (semanticId.value != ids::kSoilNitrogen)
      throw Error(ErrorCode::UnsupportedTargetConcept,
                  "'" + semanticId.value + "' is not target-enabled");

    auto path = resolvePropertyPath(*twin, semanticId);
    if (!path)
      throw Error(ErrorCode::UnsupportedTargetConcept,
                  "twin '" + fieldId.value + "' has no property for '" +
                    semanticId.value + "'");

    double current = std::get<double>(twin->readProperty(*path).value);
    if (targetValue <= current)
      throw Error(ErrorCode::TargetNotAboveCurrent,
                  "target " + std::to_string(targetValue) + " is not above current " +
                    std::to_string(current));

    ProcessTrigger trigger;
    trigger.triggerId =
      fieldId.value + "#trigger-" + std::to_string(++m_triggerSeq);
    trigger.processKind = ProcessKind::Fertilization;
    trigger.fieldId = fieldId;
    trigger.targetSemanticId = semanticId;
    trigger.targetValue = targetValue;
    trigger.issuedAt = m_now();

    if (m_sink)
    {
      try
      {
        m_sink(trigger);
      }
      catch (const std::exception &)
      {
        // at-least-once delivery: one retry, then surface the failure
        try
        {
          m_sink(trigger);
        }
        catch (const std::exception &e)
        {
          throw Error(ErrorCode::DownstreamUnavailable,
                      std::string("trigger delivery failed: ") + e.what());
        }
      }
    }
    return trigger;
  }

  TimeSeries FieldTwinService::workHistory(const TwinId &fieldId)
  {
    auto twin = requireTwin(fieldId);
    return std::get<TimeSeries>(
      twin->readProperty(joinPath("agronomic", "workHistory")).value);
  }
}  // namespace agritwin::field
