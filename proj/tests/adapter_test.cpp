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

#include <httplib.h>

#include "agritwin/core/adapter.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/sim/world.hpp"
#include "agritwin/vocab/agrivoc.hpp"
#include "agritwin/vocab/ids.hpp"
#include "oracles.hpp"

using namespace agritwin;

TEST_CASE("unit conversion applies factor, offset and casts")
{
  PropertyMapping toLiters{"tank.level_ml", SemanticId("urn:agrivoc:robot.tankLevel"),
                           0.001, 0.0, Datatype::Decimal, {}};
  // 3600 mL -> 3.6 L
  TypedValue converted = convertNativeValue(toLiters, nlohmann::json(3600.0));
  CHECK(std::get<double>(converted) == doctest::Approx(3.6));

  PropertyMapping celsius{"temp_f", SemanticId("urn:x:t"), 5.0 / 9.0, -160.0 / 9.0,
                          Datatype::Decimal, {}};
  CHECK(std::get<double>(convertNativeValue(celsius, nlohmann::json(32.0))) ==
        doctest::Approx(0.0));

  PropertyMapping status{"mode", SemanticId("urn:agrivoc:robot.status"), 1.0, 0.0,
                         Datatype::Text, {{"IDLE", "idle"}}};
  CHECK(std::get<std::string>(convertNativeValue(status, nlohmann::json("IDLE"))) ==
        "idle");
  CHECK(std::get<std::string>(convertNativeValue(status, nlohmann::json("OTHER"))) ==
        "OTHER");

  CHECK_THROWS_AS(convertNativeValue(toLiters, nlohmann::json("full")), Error);
}

TEST_CASE("dotted native paths are extracted from state documents")
{
  nlohmann::json document = {{"tank", {{"level_ml", 1200.0}}}, {"mode", "IDLE"}};
  CHECK(extractNativeField(document, "tank.level_ml") == nlohmann::json(1200.0));
  CHECK(extractNativeField(document, "mode") == nlohmann::json("IDLE"));
  try
  {
    extractNativeField(document, "tank.pressure");
    CHECK(false);
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::DownstreamUnavailable);
  }
}

TEST_CASE("mappings must hit a skeleton property and carry a usable conversion")
{
  auto vocabulary = vocab::agrivoc();
  Submodel weedwork{"weedwork", SemanticId(ids::kSmWeedwork), {}};
  weedwork.elements.push_back(PropertyElement{
    "tankLevel", SemanticId(ids::kRobotTankLevel), Datatype::Decimal, "L", 0.0,
    Timestamp::fromMillis(0)});
  TwinShell skeleton = createShell(TwinId("urn:t:r"), TwinKind::SystemTwin, {weedwork},
                                   vocabulary.get());

  AdapterSpec missing;
  missing.nativeEndpoint = "http://127.0.0.1:1";
  missing.mappings = {{"speed", SemanticId(ids::kRobotSpeed), 1.0, 0.0,
                       Datatype::Decimal, {}}};
  try
  {
    wrapNativeSystem(missing, skeleton, [] { return NativeState{}; }, {});
    CHECK(false);
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::MappingTargetMissing);
  }

  AdapterSpec zeroFactor;
  zeroFactor.nativeEndpoint = "http://127.0.0.1:1";
  zeroFactor.mappings = {{"tank", SemanticId(ids::kRobotTankLevel), 0.0, 0.0,
                          Datatype::Decimal, {}}};
  try
  {
    wrapNativeSystem(zeroFactor, skeleton, [] { return NativeState{}; }, {});
    CHECK(false);
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("both robot adapters normalize to equal twin values")
{
  // oracle = read both native states directly and convert by hand
  oracles::FakeGround ground({sim::field7Seed()});
  sim::AlphaRobotNative alpha("WX-100", ground);
  sim::BetaRobotNative beta("FR-7", ground);
  alpha.start("127.0.0.1", 19010);
  beta.start("127.0.0.1", 19011);

  auto vocabulary = vocab::agrivoc();
  auto alphaTwin = sim::makeAlphaRobotTwin(TwinId("urn:t:alpha"), alpha.baseUrl(),
                                           vocabulary.get());
  auto betaTwin = sim::makeBetaRobotTwin(TwinId("urn:t:beta"), beta.baseUrl(),
                                         vocabulary.get());

  auto rawGet = [](const std::string &url, const std::string &path) {
    httplib::Client client(url);
    auto result = client.Get(path);
    REQUIRE(result);
    REQUIRE(result->status == 200);
    return nlohmann::json::parse(result->body);
  };

  auto checkEquivalence = [&]() {
    nlohmann::json alphaState = rawGet(alpha.baseUrl(), "/rpc/get_status");
    nlohmann::json betaState = rawGet(beta.baseUrl(), "/api/v2/telemetry");

    // hand conversions from the raw vendor payloads
    double handTankAlpha = alphaState["tank_level_l"].get<double>();
    double handTankBeta = betaState["tankMilliliters"].get<double>() / 1000.0;
    double handSpeedAlpha = alphaState["ground_speed_kmh"].get<double>() / 3.6;
    double handSpeedBeta = betaState["speedMetersPerSecond"].get<double>();

    double twinTankAlpha =
      std::get<double>(alphaTwin->readProperty("weedwork/tankLevel").value);
    double twinTankBeta =
      std::get<double>(betaTwin->readProperty("weedwork/tankLevel").value);
    double twinSpeedAlpha =
      std::get<double>(alphaTwin->readProperty("weedwork/groundSpeed").value);
    double twinSpeedBeta =
      std::get<double>(betaTwin->readProperty("weedwork/groundSpeed").value);

    REQUIRE(twinTankAlpha == doctest::Approx(handTankAlpha).epsilon(1e-9));
    REQUIRE(twinTankBeta == doctest::Approx(handTankBeta).epsilon(1e-9));
    REQUIRE(twinSpeedAlpha == doctest::Approx(handSpeedAlpha).epsilon(1e-9));
    REQUIRE(twinSpeedBeta == doctest::Approx(handSpeedBeta).epsilon(1e-9));

    // the two vendors, same simulated ground state, normalize identically
    REQUIRE(twinTankAlpha == doctest::Approx(twinTankBeta).epsilon(1e-9));
    REQUIRE(twinSpeedAlpha == doctest::Approx(twinSpeedBeta).epsilon(1e-9));
    REQUIRE(std::get<std::string>(alphaTwin->readProperty("weedwork/status").value) ==
            std::get<std::string>(betaTwin->readProperty("weedwork/status").value));
  };

  checkEquivalence();  // factory state

  // drive both natives to the same ground state: one identical job each
  GeoPolygon route{{{7.752, 49.44}, {7.7578, 49.44}}};
  ArgMap args{{"route", route},
              {"cropType", std::string("potato")},
              {"fieldId", std::string(sim::field7Seed().id.value)}};
  alphaTwin->invokeOperation("weedwork/executeJob", args);
  betaTwin->invokeOperation("weedwork/executeJob", args);

  checkEquivalence();  // post-job state

  SUBCASE("mapped twin properties reject writes")
  {
    CHECK_THROWS_AS(alphaTwin->writeProperty("weedwork/tankLevel", 7.0,
                                             Timestamp::fromMillis(1)),
                    Error);
  }

  SUBCASE("a stopped native surfaces as DownstreamUnavailable")
  {
    alpha.stop();
    try
    {
      alphaTwin->readProperty("weedwork/tankLevel");
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::DownstreamUnavailable);
    }
    try
    {
      alphaTwin->invokeOperation("weedwork/executeJob", args);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::DownstreamUnavailable);
    }
  }

  alpha.stop();
  beta.stop();
}

TEST_CASE("executed jobs return a work record through the twin operation")
{
  oracles::FakeGround ground({sim::field7Seed()});
  sim::AlphaRobotNative alpha("WX-100", ground);
  alpha.start("127.0.0.1", 19012);

  auto vocabulary = vocab::agrivoc();
  auto twin =
    sim::makeAlphaRobotTwin(TwinId("urn:t:alpha"), alpha.baseUrl(), vocabulary.get());

  GeoPolygon route{{{7.752, 49.44}, {7.7578, 49.44}}};
  ArgMap outputs = twin->invokeOperation(
    "weedwork/executeJob", {{"route", route},
                            {"cropType", std::string("potato")},
                            {"fieldId", std::string(sim::field7Seed().id.value)}});

  field::JobRecord record = field::jobRecordFromJson(
    nlohmann::json::parse(std::get<std::string>(outputs.at("record"))));
  CHECK(record.jobId == "WX-100-job-1");
  CHECK(record.executedBy.value == "urn:t:alpha");
  CHECK(record.fieldId == sim::field7Seed().id);
  CHECK(record.processKind == field::ProcessKind::WeedControl);
  CHECK(record.finishedAt >= record.startedAt);
  // covered area equals the seeded field area, per the fan oracle
  CHECK(record.coveredAreaHa ==
        doctest::Approx(oracles::fanAreaHectares(sim::field7Seed().boundaries))
          .epsilon(1e-6));
  CHECK(record.outputs.at(ids::kWeedDensity).get<double>() == 0.0);

  alpha.stop();
}
