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

#include "agritwin/core/geometry.hpp"
#include "agritwin/field/field_twin.hpp"
#include "agritwin/sim/world.hpp"
#include "agritwin/vocab/agrivoc.hpp"
#include "agritwin/vocab/ids.hpp"
#include "oracles.hpp"

using namespace agritwin;

namespace
{
  struct Fixture
  {
    hub::TwinHub hub;
    field::FieldTwinService fields;
    TwinId fieldId = sim::field7Seed().id;

    Fixture()
      : hub(hubConfig()), fields(hub, [] { return Timestamp::fromMillis(0); })
    {
      hub.start();
      fields.hostField(sim::field7Seed());
    }

    ~Fixture() { hub.stop(); }

    static hub::TwinHub::Config hubConfig()
    {
      hub::TwinHub::Config config;
      config.port = 19030;
      config.vocabulary = vocab::agrivoc();
      return config;
    }
  };
}  // namespace

TEST_CASE("the standard field shell carries all three data dimensions")
{
  TwinShell shell =
    field::buildFieldShell(sim::field7Seed(), Timestamp::fromMillis(0));
  ShellDescriptor descriptor = describe(shell);

  std::vector<std::string> names;
  for (const auto &submodel : descriptor.submodels)
    names.push_back(submodel.shortName);
  CHECK(names == std::vector<std::string>{"geographic", "environmental", "agronomic"});

  const auto &boundaries = getProperty(shell, "geographic/boundaries");
  const auto &ring = std::get<GeoPolygon>(boundaries.value);
  CHECK(isClosedRing(ring));
  CHECK(ring.points.size() >= 4);

  // seeds with broken invariants never become shells
  field::FieldSeed bad = sim::field7Seed();
  bad.initialNitrogenKgHa = -1;
  CHECK_THROWS_AS(field::buildFieldShell(bad, Timestamp::fromMillis(0)), Error);

  field::FieldSeed openRing = sim::field7Seed();
  openRing.boundaries.points.pop_back();
  CHECK_THROWS_AS(field::buildFieldShell(openRing, Timestamp::fromMillis(0)), Error);
}

TEST_CASE("sensor ingestion applies vocabulary checks and the currentness policy")
{
  Fixture f;

  CHECK(f.fields.ingestSensorReading(f.fieldId, SemanticId(ids::kSoilNitrogen), 42.0,
                                     "kg/ha", Timestamp::fromMillis(1000)));
  auto data = f.fields.readFieldData(f.fieldId, {SemanticId(ids::kSoilNitrogen)});
  CHECK(std::get<double>(data.at(ids::kSoilNitrogen).value) == 42.0);

  // stale reading: rejected, twin unchanged
  CHECK_FALSE(f.fields.ingestSensorReading(f.fieldId, SemanticId(ids::kSoilNitrogen),
                                           40.0, "kg/ha", Timestamp::fromMillis(500)));
  data = f.fields.readFieldData(f.fieldId, {SemanticId(ids::kSoilNitrogen)});
  CHECK(std::get<double>(data.at(ids::kSoilNitrogen).value) == 42.0);

  SUBCASE("unit violation")
  {
    try
    {
      f.fields.ingestSensorReading(f.fieldId, SemanticId(ids::kSoilNitrogen), 42.0,
                                   "mg/kg", Timestamp::fromMillis(2000));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::UnitViolation);
    }
  }

  SUBCASE("datatype violation")
  {
    try
    {
      f.fields.ingestSensorReading(f.fieldId, SemanticId(ids::kSoilNitrogen),
                                   std::string("high"), "kg/ha",
                                   Timestamp::fromMillis(2000));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::DatatypeMismatch);
    }
  }

  SUBCASE("unknown concept")
  {
    try
    {
      f.fields.ingestSensorReading(f.fieldId, SemanticId("urn:agrivoc:made.up"), 1.0,
                                   "1", Timestamp::fromMillis(2000));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::UnresolvableSemanticId);
    }
  }

  SUBCASE("field not hosted")
  {
    try
    {
      f.fields.ingestSensorReading(TwinId("urn:agritwin:field:ghost"),
                                   SemanticId(ids::kSoilNitrogen), 1.0, "kg/ha",
                                   Timestamp::fromMillis(2000));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::TwinUnavailable);
    }
  }

  SUBCASE("domain ranges are enforced on the twin itself")
  {
    try
    {
      f.fields.ingestSensorReading(f.fieldId, SemanticId(ids::kPlantHealthIndex), 1.5,
                                   "1", Timestamp::fromMillis(2000));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::InvalidArgument);
    }
    try
    {
      f.fields.ingestSensorReading(f.fieldId, SemanticId(ids::kSoilNitrogen), -4.0,
                                   "kg/ha", Timestamp::fromMillis(2000));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::InvalidArgument);
    }
  }
}

TEST_CASE("readFieldData reports missing ids per id")
{
  Fixture f;

  auto data = f.fields.readFieldData(
    f.fieldId, {SemanticId(ids::kFieldBoundaries), SemanticId(ids::kCropType)});
  REQUIRE(data.size() == 2);
  CHECK(data.at(ids::kFieldBoundaries).found);
  CHECK(data.at(ids::kCropType).found);
  CHECK(std::get<std::string>(data.at(ids::kCropType).value) == "potato");

  CHECK(f.fields.readFieldData(f.fieldId, {}).empty());

  auto missing = f.fields.readFieldData(f.fieldId, {SemanticId("urn:agrivoc:robot.status")});
  REQUIRE(missing.size() == 1);
  CHECK_FALSE(missing.at("urn:agrivoc:robot.status").found);
}

TEST_CASE("recordWork appends history and writes outputs through")
{
  Fixture f;

  field::JobRecord record;
  record.jobId = "job-1";
  record.fieldId = f.fieldId;
  record.processKind = field::ProcessKind::Fertilization;
  record.executedBy = TwinId("urn:t:spreader");
  record.startedAt = Timestamp::fromMillis(1000);
  record.finishedAt = Timestamp::fromMillis(2000);
  record.coveredAreaHa = 10.0;
  record.outputs[ids::kSoilNitrogen] = 60.0;

  f.fields.recordWork(f.fieldId, record);

  auto data = f.fields.readFieldData(f.fieldId, {SemanticId(ids::kSoilNitrogen)});
  CHECK(std::get<double>(data.at(ids::kSoilNitrogen).value) == 60.0);
  CHECK(data.at(ids::kSoilNitrogen).lastUpdated == record.finishedAt);

  field::JobRecord second = record;
  second.jobId = "job-2";
  second.startedAt = Timestamp::fromMillis(3000);
  second.finishedAt = Timestamp::fromMillis(4000);
  second.outputs[ids::kSoilNitrogen] = 70.0;
  f.fields.recordWork(f.fieldId, second);

  TimeSeries history = f.fields.workHistory(f.fieldId);
  REQUIRE(history.samples.size() == 2);
  CHECK(history.samples[0].value["jobId"] == "job-1");
  CHECK(history.samples[1].value["jobId"] == "job-2");
  CHECK(history.samples[0].at <= history.samples[1].at);

  SUBCASE("invalid records are rejected whole")
  {
    field::JobRecord broken = record;
    broken.jobId = "job-3";
    broken.finishedAt = Timestamp::fromMillis(100);  // before startedAt
    try
    {
      f.fields.recordWork(f.fieldId, broken);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::InvalidArgument);
    }
    CHECK(f.fields.workHistory(f.fieldId).samples.size() == 2);
  }

  SUBCASE("outputs with unknown semantic ids are rejected before any write")
  {
    field::JobRecord unknown = record;
    unknown.jobId = "job-4";
    unknown.startedAt = Timestamp::fromMillis(5000);
    unknown.finishedAt = Timestamp::fromMillis(6000);
    unknown.outputs.clear();
    unknown.outputs["urn:agrivoc:made.up"] = 1.0;
    try
    {
      f.fields.recordWork(f.fieldId, unknown);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::UnresolvableSemanticId);
    }
    CHECK(f.fields.workHistory(f.fieldId).samples.size() == 2);
  }
}

TEST_CASE("setTarget validates the concept and the direction")
{
  Fixture f;

  std::vector<field::ProcessTrigger> delivered;
  f.fields.setTriggerSink(
    [&delivered](const field::ProcessTrigger &t) { delivered.push_back(t); });

  SUBCASE("a valid target emits exactly one trigger")
  {
    field::ProcessTrigger trigger =
      f.fields.setTarget(f.fieldId, SemanticId(ids::kSoilNitrogen), 60.0);
    CHECK(trigger.processKind == field::ProcessKind::Fertilization);
    CHECK(trigger.targetValue == 60.0);
    CHECK(trigger.fieldId == f.fieldId);
    REQUIRE(delivered.size() == 1);
    CHECK(delivered[0].triggerId == trigger.triggerId);
  }

  SUBCASE("target at or below current is rejected")
  {
    try
    {
      f.fields.setTarget(f.fieldId, SemanticId(ids::kSoilNitrogen), 25.0);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::TargetNotAboveCurrent);
    }
    CHECK(delivered.empty());
  }

  SUBCASE("only nitrogen is target-enabled")
  {
    try
    {
      f.fields.setTarget(f.fieldId, SemanticId(ids::kPlantHealthIndex), 1.0);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::UnsupportedTargetConcept);
    }
    CHECK(delivered.empty());
  }

  SUBCASE("a flaky sink is retried once (at-least-once delivery)")
  {
    int calls = 0;
    f.fields.setTriggerSink([&calls](const field::ProcessTrigger &) {
      if (++calls == 1)
        throw std::runtime_error("first delivery lost");
    });
    CHECK_NOTHROW(f.fields.setTarget(f.fieldId, SemanticId(ids::kSoilNitrogen), 50.0));
    CHECK(calls == 2);
  }
}

TEST_CASE("job records normalize by dropping identity and clock fields")
{
  field::JobRecord record;
  record.jobId = "a-1";
  record.fieldId = TwinId("urn:f:1");
  record.processKind = field::ProcessKind::WeedControl;
  record.executedBy = TwinId("urn:t:alpha");
  record.startedAt = Timestamp::fromMillis(10);
  record.finishedAt = Timestamp::fromMillis(20);
  record.coveredAreaHa = 11.5;
  record.outputs[ids::kWeedDensity] = 0.0;

  field::JobRecord other = record;
  other.jobId = "b-9";
  other.executedBy = TwinId("urn:t:beta");
  other.startedAt = Timestamp::fromMillis(5000);
  other.finishedAt = Timestamp::fromMillis(6000);

  CHECK(field::normalizedRecordJson(record) == field::normalizedRecordJson(other));
  CHECK(field::toJson(record) != field::toJson(other));

  // serialization round-trip
  field::JobRecord reparsed = field::jobRecordFromJson(field::toJson(record));
  CHECK(field::toJson(reparsed) == field::toJson(record));
}
