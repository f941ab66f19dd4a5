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

#include <filesystem>
#include <random>

#include "agritwin/core/geometry.hpp"
#include "agritwin/field/field_twin.hpp"
#include "agritwin/hub/twin_hub.hpp"
#include "agritwin/sim/world.hpp"
#include "agritwin/vocab/agrivoc.hpp"
#include "agritwin/vocab/ids.hpp"
#include "oracles.hpp"

using namespace agritwin;

namespace
{
  ShellDescriptor plainDescriptor(const std::string &id, TwinKind kind)
  {
    TwinShell shell = createShell(TwinId(id), kind, {});
    ShellDescriptor descriptor = describe(shell);
    descriptor.endpoint = "http://127.0.0.1:1/" + id;
    return descriptor;
  }

  std::string tmpDir(const std::string &tag)
  {
    auto dir = std::filesystem::temp_directory_path() / ("agritwin-test-" + tag);
    std::filesystem::remove_all(dir);
    return dir.string();
  }
}  // namespace

TEST_CASE("registry register/lookup/deregister")
{
  hub::Registry registry(vocab::agrivoc());
  ShellDescriptor field7 = plainDescriptor("urn:agritwin:field:field-7",
                                           TwinKind::FieldTwin);

  registry.registerTwin(field7, {}, Timestamp::fromMillis(1));
  CHECK(registry.lookup(field7.id) == field7);

  SUBCASE("duplicate ids are rejected")
  {
    try
    {
      registry.registerTwin(field7, {}, Timestamp::fromMillis(2));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::DuplicateTwinId);
    }
  }

  SUBCASE("tags over unknown concepts are rejected")
  {
    ShellDescriptor other = plainDescriptor("urn:t:x", TwinKind::SystemTwin);
    try
    {
      registry.registerTwin(other, {{"urn:agrivoc:not.a.concept", 1.0}},
                            Timestamp::fromMillis(2));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::UnresolvableSemanticId);
    }
  }

  SUBCASE("closed-world check rejects twins with unknown element ids")
  {
    Submodel submodel{"sm", SemanticId("urn:agrivoc:sm.agronomic"), {}};
    submodel.elements.push_back(PropertyElement{
      "p", SemanticId("urn:agrivoc:made.up"), Datatype::Decimal, "1", 0.0,
      Timestamp::fromMillis(0)});
    ShellDescriptor bad =
      describe(createShell(TwinId("urn:t:bad"), TwinKind::SystemTwin, {submodel}));
    try
    {
      registry.registerTwin(bad, {}, Timestamp::fromMillis(2));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::UnresolvableSemanticId);
    }
  }

  SUBCASE("deregistration is idempotent-failing")
  {
    registry.deregisterTwin(field7.id);
    try
    {
      registry.lookup(field7.id);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::NotFound);
    }
    CHECK_THROWS_AS(registry.deregisterTwin(field7.id), Error);
  }
}

TEST_CASE("crop filter picks exactly the matching field twins")
{
  hub::Registry registry(vocab::agrivoc());
  // crops as in the two-crop weed control setting
  const std::pair<const char *, const char *> fields[] = {
    {"urn:f:1", "potato"}, {"urn:f:2", "sugar beet"}, {"urn:f:3", "sugar beet"}};
  for (const auto &[id, crop] : fields)
    registry.registerTwin(plainDescriptor(id, TwinKind::FieldTwin),
                          {{ids::kCropType, std::string(crop)}},
                          Timestamp::fromMillis(1));

  hub::TwinQuery query;
  query.predicates.push_back(
    {SemanticId(ids::kCropType), hub::Comparator::Eq, std::string("sugar beet")});
  auto hits = registry.query(query);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].value == "urn:f:2");
  CHECK(hits[1].value == "urn:f:3");

  // empty predicate list returns everything, ordered by id
  CHECK(registry.query({}).size() == 3);

  hub::TwinQuery unknown;
  unknown.predicates.push_back(
    {SemanticId("urn:agrivoc:not.a.concept"), hub::Comparator::Eq, 1.0});
  CHECK_THROWS_AS(registry.query(unknown), Error);
}

TEST_CASE("randomized queries equal the brute-force oracle")
{
  auto vocabulary = vocab::agrivoc();
  hub::Registry registry(vocabulary);
  std::mt19937 rng(4242);

  std::uniform_real_distribution<double> nitrogen(0.0, 100.0);
  std::uniform_real_distribution<double> health(0.0, 1.0);
  std::uniform_int_distribution<int> cropPick(0, 3);
  std::uniform_int_distribution<int> kindPick(0, 1);
  const char *crops[] = {"potato", "sugar beet", "wheat", "maize"};

  std::mt19937 geometryRng(77);
  std::map<std::string, GeoPoint> oracleCentroids;

  const int twinCount = 100;
  for (int i = 0; i < twinCount; ++i)
  {
    std::string id = "urn:t:q" + std::to_string(1000 + i);
    TwinKind kind = kindPick(rng) ? TwinKind::FieldTwin : TwinKind::SystemTwin;
    registry.registerTwin(plainDescriptor(id, kind),
                          {{ids::kCropType, std::string(crops[cropPick(rng)])},
                           {ids::kSoilNitrogen, nitrogen(rng)},
                           {ids::kPlantHealthIndex, health(rng)}},
                          Timestamp::fromMillis(i));

    // random simple polygon around a random point; the registry stores the
    // library centroid, the oracle recomputes its own from the same ring
    std::uniform_real_distribution<double> lon(7.0, 8.0), lat(49.0, 50.0),
      span(0.001, 0.02);
    double x = lon(geometryRng), y = lat(geometryRng), w = span(geometryRng),
           h = span(geometryRng);
    GeoPolygon ring{{{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}, {x, y}}};
    registry.updateCentroid(TwinId(id), ringCentroid(ring));
    oracleCentroids[id] = oracles::fanCentroid(ring);
  }

  std::uniform_int_distribution<int> predicateCount(0, 3);
  std::uniform_int_distribution<int> comparatorPick(0, 4);
  std::uniform_int_distribution<int> conceptPick(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  const hub::Comparator comparators[] = {hub::Comparator::Eq, hub::Comparator::Lt,
                                         hub::Comparator::Le, hub::Comparator::Gt,
                                         hub::Comparator::Ge};

  int mismatches = 0;
  for (int q = 0; q < 50; ++q)
  {
    hub::TwinQuery query;
    if (coin(rng))
      query.kind = coin(rng) ? TwinKind::FieldTwin : TwinKind::SystemTwin;

    int nPredicates = predicateCount(rng);
    for (int p = 0; p < nPredicates; ++p)
    {
      switch (conceptPick(rng))
      {
        case 0:
          query.predicates.push_back({SemanticId(ids::kCropType), hub::Comparator::Eq,
                                      std::string(crops[cropPick(rng)])});
          break;
        case 1:
          query.predicates.push_back({SemanticId(ids::kSoilNitrogen),
                                      comparators[comparatorPick(rng)], nitrogen(rng)});
          break;
        default:
          query.predicates.push_back({SemanticId(ids::kPlantHealthIndex),
                                      comparators[comparatorPick(rng)], health(rng)});
          break;
      }
    }
    if (coin(rng))
    {
      std::uniform_real_distribution<double> lon(7.0, 8.0), lat(49.0, 50.0);
      double lon0 = lon(rng), lon1 = lon(rng), lat0 = lat(rng), lat1 = lat(rng);
      query.geoBox = hub::GeoBox{std::min(lon0, lon1), std::min(lat0, lat1),
                                 std::max(lon0, lon1), std::max(lat0, lat1)};
    }

    std::vector<std::string> got;
    for (const TwinId &id : registry.query(query))
      got.push_back(id.value);
    std::vector<std::string> expected =
      oracles::bruteForceQuery(registry.entries(), query, oracleCentroids);

    if (got != expected)
      ++mismatches;
    REQUIRE(got == expected);  // results are sorted lexicographically by id
  }
  CHECK(mismatches == 0);
}

TEST_CASE("hosting, write-through tags, suspension and persistence")
{
  std::string dataDir = tmpDir("hub-host");

  hub::TwinHub::Config config;
  config.port = 19020;
  config.dataDir = dataDir;
  config.vocabulary = vocab::agrivoc();
  auto hub = std::make_unique<hub::TwinHub>(config);
  hub->start();

  field::FieldTwinService fields(*hub, [] { return Timestamp::fromMillis(0); });
  std::string endpoint = fields.hostField(sim::field7Seed());
  CHECK(endpoint == hub->endpointFor(sim::field7Seed().id));

  const TwinId fieldId = sim::field7Seed().id;

  SUBCASE("hosted twins are auto-registered and re-hosting is rejected")
  {
    CHECK(hub->registry().lookup(fieldId).endpoint == endpoint);
    CHECK_THROWS_AS(fields.hostField(sim::field7Seed()), Error);

    // only field twins can be hosted
    TwinShell system = createShell(TwinId("urn:t:sys"), TwinKind::SystemTwin, {});
    CHECK_THROWS_AS(hub->hostFieldTwin(system), Error);
  }

  SUBCASE("facet tags are seeded at hosting and refreshed on write-through")
  {
    hub::RegistryEntry entry = hub->registry().entry(fieldId);
    REQUIRE(entry.tags.count(ids::kCropType));
    CHECK(std::get<std::string>(entry.tags.at(ids::kCropType)) == "potato");
    REQUIRE(entry.tags.count(ids::kSoilNitrogen));
    CHECK(std::get<double>(entry.tags.at(ids::kSoilNitrogen)) == 30.0);
    REQUIRE(entry.centroid.has_value());

    fields.ingestSensorReading(fieldId, SemanticId(ids::kSoilNitrogen), 55.0, "kg/ha",
                               Timestamp::fromMillis(1000));
    entry = hub->registry().entry(fieldId);
    CHECK(std::get<double>(entry.tags.at(ids::kSoilNitrogen)) == 55.0);
  }

  SUBCASE("suspension keeps the registry entry but blocks the twin")
  {
    hub->suspendTwin(fieldId);
    CHECK(hub->registry().lookup(fieldId).id == fieldId);
    CHECK_THROWS_AS(hub->hostedTwin(fieldId), Error);

    HttpTwin remote(endpoint);
    try
    {
      remote.readProperty("agronomic/soilNitrogen");
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::TwinUnavailable);
    }

    hub->resumeTwin(fieldId);
    CHECK_NOTHROW(hub->hostedTwin(fieldId));
  }

  SUBCASE("persistence round-trip: values and timestamps survive a restart")
  {
    fields.ingestSensorReading(fieldId, SemanticId(ids::kSoilNitrogen), 61.5, "kg/ha",
                               Timestamp::fromMillis(2000));
    fields.ingestSensorReading(fieldId, SemanticId(ids::kWeedDensity), 0.25, "1/m2",
                               Timestamp::fromMillis(2500));

    field::JobRecord record;
    record.jobId = "job-1";
    record.fieldId = fieldId;
    record.processKind = field::ProcessKind::WeedControl;
    record.executedBy = TwinId("urn:t:robot");
    record.startedAt = Timestamp::fromMillis(2600);
    record.finishedAt = Timestamp::fromMillis(2700);
    record.coveredAreaHa = 11.75;
    fields.recordWork(fieldId, record);

    auto before = hub->hostedTwin(fieldId)->snapshot();
    hub->stop();
    hub.reset();

    hub = std::make_unique<hub::TwinHub>(config);
    hub->start();  // restores from the snapshot log
    auto after = hub->hostedTwin(fieldId)->snapshot();

    REQUIRE(after.size() == before.size());
    for (const auto &[path, element] : before)
    {
      REQUIRE(after.count(path));
      CHECK(after.at(path).value == element.value);
      CHECK(after.at(path).lastUpdated == element.lastUpdated);
      CHECK(after.at(path).unit == element.unit);
    }

    // the twin is reachable again under the same id and endpoint
    CHECK(hub->registry().lookup(fieldId).endpoint == endpoint);
    HttpTwin remote(endpoint);
    CHECK(std::get<double>(remote.readProperty("agronomic/soilNitrogen").value) == 61.5);

    // operations need re-binding after a restore
    field::FieldTwinService restored(*hub, {});
    restored.attachAll();
    CHECK(restored.workHistory(fieldId).samples.size() == 1);
  }

  hub->stop();
  std::filesystem::remove_all(dataDir);
}

TEST_CASE("hub HTTP surface: registry, query, concepts")
{
  hub::TwinHub::Config config;
  config.port = 19021;
  config.vocabulary = vocab::agrivoc();
  hub::TwinHub hub(config);
  hub.start();

  hub::HubClient client(hub.baseUrl());

  ShellDescriptor system = plainDescriptor("urn:t:sys-a", TwinKind::SystemTwin);
  client.registerTwin(system, {{ids::kCropType, std::string("potato")}});
  CHECK(client.lookup(system.id) == system);

  SUBCASE("query over HTTP")
  {
    hub::TwinQuery query;
    query.kind = TwinKind::SystemTwin;
    query.predicates.push_back(
      {SemanticId(ids::kCropType), hub::Comparator::Eq, std::string("potato")});
    auto hits = client.query(query);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0] == system.id);
  }

  SUBCASE("deregistration over HTTP")
  {
    client.deregisterTwin(system.id);
    try
    {
      client.lookup(system.id);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::NotFound);
    }
  }

  SUBCASE("duplicate registration over HTTP")
  {
    try
    {
      client.registerTwin(system, {});
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::DuplicateTwinId);
    }
  }

  SUBCASE("concept lookup over HTTP")
  {
    vocab::ConceptDescription concept_ =
      client.lookupConcept(SemanticId(ids::kSoilNitrogen));
    CHECK(concept_.canonicalUnit == "kg/ha");
    CHECK(concept_.datatype == Datatype::Decimal);

    try
    {
      client.lookupConcept(SemanticId("urn:agrivoc:nope"));
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::NotFound);
    }
  }

  hub.stop();
}
