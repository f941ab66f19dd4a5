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

#include "agritwin/sim/world.hpp"

#include <filesystem>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/sim/recipes.hpp"
#include "agritwin/vocab/agrivoc.hpp"
#include "agritwin/vocab/ids.hpp"

namespace agritwin::sim
{
  namespace
  {
    constexpr std::int64_t kStepMillis = 60000;  // one simulated minute per step
    const char *kEpoch = "2026-04-01T00:00:00.000Z";

    GeoPolygon rectangle(double lon0, double lat0, double lonSpanDeg, double latSpanDeg)
    {
      return GeoPolygon{{{lon0, lat0},
                         {lon0 + lonSpanDeg, lat0},
                         {lon0 + lonSpanDeg, lat0 + latSpanDeg},
                         {lon0, lat0 + latSpanDeg},
                         {lon0, lat0}}};
    }
  }  // namespace

  field::FieldSeed field7Seed()
  {
    field::FieldSeed seed;
    seed.id = TwinId("urn:agritwin:field:field-7");
    // roughly 420 m x 280 m at 49.44 N
    seed.boundaries = rectangle(7.7520, 49.4400, 0.0058, 0.0025);
    seed.slopePercent = 2.5;
    seed.crop = "potato";
    seed.initialNitrogenKgHa = 30.0;
    seed.initialWeedDensity = 1.5;
    return seed;
  }

  field::FieldSeed field8Seed()
  {
    field::FieldSeed seed;
    seed.id = TwinId("urn:agritwin:field:field-8");
    seed.boundaries = rectangle(7.7640, 49.4452, 0.0042, 0.0031);
    seed.slopePercent = 1.2;
    seed.crop = "sugar beet";
    seed.initialNitrogenKgHa = 45.0;
    seed.initialWeedDensity = 2.0;
    return seed;
  }

  field::FieldSeed field9Seed()
  {
    field::FieldSeed seed;
    seed.id = TwinId("urn:agritwin:field:field-9");
    seed.boundaries = rectangle(7.7710, 49.4381, 0.0050, 0.0027);
    seed.slopePercent = 0.8;
    seed.crop = "sugar beet";
    seed.initialNitrogenKgHa = 30.0;
    seed.initialWeedDensity = 1.8;
    return seed;
  }

  ScenarioSpec ScenarioSpec::forName(const std::string &name, std::uint64_t seed)
  {
    ScenarioSpec spec;
    spec.name = name;
    spec.seed = seed;

    if (name == "adiop1")
    {
      spec.cast = {{"SP_1", "weed control service provider"},
                   {"Sys_1", "weed control operation system (orchestrator)"},
                   {"Sys_2", "robot-alpha (vendor WX)"},
                   {"Sys_3", "robot-beta (vendor FR)"},
                   {"F_1", "farmer-1"}};
    }
    else if (name == "adiop2")
    {
      spec.cast = {{"S_1", "frs-1 (fertilization recommendation service)"},
                   {"F_1", "farmer-1"},
                   {"FMIS_1", "incumbent FMIS (off stage)"},
                   {"newFMIS", "fmis-nova"}};
    }
    else if (name == "closedloop")
    {
      spec.cast = {{"F_1", "farmer-1"},
                   {"fieldTwin", "field-7"},
                   {"process", "fertilization via spreader-1"}};
    }
    else
    {
      throw Error(ErrorCode::ScenarioUnknown, "no scenario named '" + name + "'");
    }
    return spec;
  }

  ScenarioSpec ScenarioSpec::fromJson(const nlohmann::json &value)
  {
    ScenarioSpec spec = forName(value.at("name").get<std::string>(),
                                value.value("seed", std::uint64_t{1}));
    nlohmann::json overrides = value.value("overrides", nlohmann::json::object());
    spec.basePort = overrides.value("basePort", spec.basePort);
    spec.dataDir = overrides.value("dataDir", spec.dataDir);
    spec.fertilizerStepKgHa =
      overrides.value("fertilizerStepKgHa", spec.fertilizerStepKgHa);
    spec.samplingEveryNSteps =
      overrides.value("samplingEveryNSteps", spec.samplingEveryNSteps);
    spec.sensorNoiseStd = overrides.value("sensorNoiseStd", spec.sensorNoiseStd);
    spec.validate();
    return spec;
  }

  void ScenarioSpec::validate() const
  {
    if (cast.empty())
      throw Error(ErrorCode::BadConfig, "scenario cast is empty");
    for (const auto &[role, component] : cast)
      if (role.empty() || component.empty())
        throw Error(ErrorCode::BadConfig, "scenario cast maps '" + role + "' to ''");
    if (fertilizerStepKgHa <= 0)
      throw Error(ErrorCode::BadConfig, "fertilizer step must be positive");
    if (samplingEveryNSteps < 1)
      throw Error(ErrorCode::BadConfig, "sampling interval must be >= 1 step");
  }

  nlohmann::json toJson(const ScenarioSpec &spec)
  {
    return {{"name", spec.name},
            {"seed", spec.seed},
            {"cast", spec.cast},
            {"overrides",
             {{"basePort", spec.basePort},
              {"fertilizerStepKgHa", spec.fertilizerStepKgHa},
              {"samplingEveryNSteps", spec.samplingEveryNSteps},
              {"sensorNoiseStd", spec.sensorNoiseStd}}}};
  }

  World::World(ScenarioSpec spec, std::string host)
    : m_spec(std::move(spec)), m_host(std::move(host)), m_rng(m_spec.seed)
  {
    m_spec.validate();
  }

  World::~World()
  {
    stop();
    if (m_ownsDataDir)
    {
      std::error_code ec;
      std::filesystem::remove_all(m_spec.dataDir, ec);
    }
  }

  Timestamp World::now() const
  {
    static const std::int64_t epochMillis = Timestamp::parse(kEpoch).millis();
    return Timestamp::fromMillis(epochMillis + m_step.load() * kStepMillis);
  }

  void World::start()
  {
    if (m_started)
      return;

    if (m_spec.dataDir.empty())
    {
      m_spec.dataDir = (std::filesystem::temp_directory_path() /
                        ("agritwin-world-" + m_spec.name + "-p" +
                         std::to_string(m_spec.basePort) + "-s" +
                         std::to_string(m_spec.seed)))
                         .string();
      std::filesystem::remove_all(m_spec.dataDir);
      m_ownsDataDir = true;
    }

    // deterministic ground truth; the seed perturbs only the weed pressure
    std::uniform_real_distribution<double> weedJitter(0.0, 0.5);
    for (const auto &seed : {field7Seed(), field8Seed(), field9Seed()})
    {
      GroundField ground;
      ground.seed = seed;
      ground.seed.initialWeedDensity =
        round6(seed.initialWeedDensity + weedJitter(m_rng));
      ground.nitrogenKgHa = seed.initialNitrogenKgHa;
      ground.weedDensityPerM2 = ground.seed.initialWeedDensity;
      m_ground.emplace(seed.id.value, std::move(ground));
    }

    int port = m_spec.basePort;
    const int hubPort = port + 0;
    const int mediatorPort = port + 1;
    const int orchestratorPort = port + 2;
    const int alphaNativePort = port + 3;
    const int betaNativePort = port + 4;
    const int plannerNativePort = port + 5;
    const int spreaderNativePort = port + 6;
    const int fmisNativePort = port + 7;
    const int alphaTwinPort = port + 8;
    const int betaTwinPort = port + 9;
    const int plannerTwinPort = port + 10;
    const int spreaderTwinPort = port + 11;
    const int fmisTwinPort = port + 12;
    const int frsTwinPort = port + 13;

    m_vocabulary = vocab::agrivoc();

    hub::TwinHub::Config hubConfig;
    hubConfig.host = m_host;
    hubConfig.port = hubPort;
    hubConfig.dataDir = m_spec.dataDir;
    hubConfig.vocabulary = m_vocabulary;
    hubConfig.now = [this] { return now(); };
    m_hub = std::make_unique<hub::TwinHub>(std::move(hubConfig));
    m_hub->start();

    m_fieldService =
      std::make_unique<field::FieldTwinService>(*m_hub, [this] { return now(); });
    {
      std::lock_guard lock(m_groundMutex);
      m_fieldService->hostField(m_ground.at(field7Id().value).seed);
      m_fieldService->hostField(m_ground.at(field8Id().value).seed);
    }

    m_alphaNative = std::make_unique<AlphaRobotNative>("WX-100", *this);
    m_alphaNative->start(m_host, alphaNativePort);
    m_betaNative = std::make_unique<BetaRobotNative>("FR-7", *this);
    m_betaNative->start(m_host, betaNativePort);
    m_plannerNative = std::make_unique<RoutePlannerNative>();
    m_plannerNative->start(m_host, plannerNativePort);
    m_spreaderNative = std::make_unique<SpreaderNative>("SPR-1", *this);
    m_spreaderNative->start(m_host, spreaderNativePort);
    m_fmisNative = std::make_unique<FmisNative>(field9Seed(), *this);
    // the new FMIS enters the market only via the adiop2 stimulus
    (void)fmisNativePort;

    auto serveSystemTwin = [this](HttpService &http, std::shared_ptr<AdaptedTwin> twin,
                                  int twinPort, bool registerNow) {
      mountTwin(http.server(), "", twin);
      http.start(m_host, twinPort);
      if (registerNow)
      {
        ShellDescriptor descriptor = twin->describe();
        descriptor.endpoint = http.baseUrl();
        hub::HubClient(hubUrl()).registerTwin(descriptor, {});
      }
    };

    m_alphaTwin =
      makeAlphaRobotTwin(alphaTwinId(), m_alphaNative->baseUrl(), m_vocabulary.get());
    serveSystemTwin(m_alphaTwinHttp, m_alphaTwin, alphaTwinPort, true);

    // the vendor ships robot-beta with a twin, but the farm has not adopted
    // it yet: served, not registered
    m_betaTwin =
      makeBetaRobotTwin(betaTwinId(), m_betaNative->baseUrl(), m_vocabulary.get());
    serveSystemTwin(m_betaTwinHttp, m_betaTwin, betaTwinPort, false);

    m_plannerTwin =
      makePlannerTwin(plannerTwinId(), m_plannerNative->baseUrl(), m_vocabulary.get());
    serveSystemTwin(m_plannerTwinHttp, m_plannerTwin, plannerTwinPort, true);

    m_spreaderTwin =
      makeSpreaderTwin(spreaderTwinId(), m_spreaderNative->baseUrl(), m_vocabulary.get());
    serveSystemTwin(m_spreaderTwinHttp, m_spreaderTwin, spreaderTwinPort, true);

    m_fmisTwin = makeFmisTwin(fmisTwinId(), "http://" + m_host + ":" +
                                              std::to_string(fmisNativePort),
                              m_vocabulary.get());
    (void)fmisTwinPort;

    mediator::Mediator::Deps mediatorDeps = mediator::hubBackedDeps(
      hubUrl(), m_vocabulary, [this] { return now(); });
    m_mediator = std::make_shared<mediator::Mediator>(std::move(mediatorDeps));
    mediator::mountMediator(m_mediatorHttp.server(), m_mediator);
    m_mediatorHttp.start(m_host, mediatorPort);

    orch::Orchestrator::Deps orchestratorDeps =
      orch::hubBackedDeps(hubUrl(), [this] { return now(); });
    m_orchestrator = std::make_shared<orch::Orchestrator>(std::move(orchestratorDeps));
    m_orchestrator->registerRecipe(orch::loadRecipe(weedControlPotatoRecipe()));
    m_orchestrator->registerRecipe(orch::loadRecipe(weedControlSugarBeetRecipe()));
    m_orchestrator->registerRecipe(orch::loadRecipe(
      m_spec.fertilizerStepKgHa == 10.0
        ? fertilizationRecipe()
        : fertilizationRecipeWithAmount(m_spec.fertilizerStepKgHa)));
    m_orchestrator->setProcessDefaults(field::ProcessKind::Fertilization,
                                       "fertilization",
                                       {{"spreader", spreaderTwinId()}});
    orch::mountOrchestrator(m_orchestratorHttp.server(), m_orchestrator);
    m_orchestratorHttp.start(m_host, orchestratorPort);

    m_fieldService->setTriggerSink([this](const field::ProcessTrigger &trigger) {
      orch::OrchestratorClient(orchestratorUrl()).deliverTrigger(trigger);
    });

    RecommendationService::Config frsConfig;
    frsConfig.hubUrl = hubUrl();
    frsConfig.mediatorUrl = mediatorUrl();
    frsConfig.host = m_host;
    frsConfig.twinPort = frsTwinPort;
    m_frs = std::make_unique<RecommendationService>(std::move(frsConfig), m_vocabulary,
                                                    [this] { return now(); });
    if (m_spec.name == "adiop2")
      m_frs->start();

    m_started = true;
  }

  void World::stop()
  {
    if (!m_started)
      return;
    if (m_frs)
      m_frs->stop();
    m_fmisTwinHttp.stop();
    m_spreaderTwinHttp.stop();
    m_plannerTwinHttp.stop();
    m_betaTwinHttp.stop();
    m_alphaTwinHttp.stop();
    m_orchestratorHttp.stop();
    m_mediatorHttp.stop();
    if (m_fmisNative)
      m_fmisNative->stop();
    if (m_spreaderNative)
      m_spreaderNative->stop();
    if (m_plannerNative)
      m_plannerNative->stop();
    if (m_betaNative)
      m_betaNative->stop();
    if (m_alphaNative)
      m_alphaNative->stop();
    if (m_hub)
      m_hub->stop();
    m_started = false;
  }

  std::string World::hubUrl() const
  {
    return "http://" + m_host + ":" + std::to_string(m_spec.basePort);
  }

  std::string World::mediatorUrl() const
  {
    return "http://" + m_host + ":" + std::to_string(m_spec.basePort + 1);
  }

  std::string World::orchestratorUrl() const
  {
    return "http://" + m_host + ":" + std::to_string(m_spec.basePort + 2);
  }

  std::string World::alphaTwinEndpoint() const { return m_alphaTwinHttp.baseUrl(); }
  std::string World::betaTwinEndpoint() const { return m_betaTwinHttp.baseUrl(); }
  std::string World::fmisTwinEndpoint() const { return m_fmisTwinHttp.baseUrl(); }

  World::GroundField &World::groundField(const TwinId &fieldId)
  {
    auto it = m_ground.find(fieldId.value);
    if (it == m_ground.end())
      throw Error(ErrorCode::NotFound, "no simulated field '" + fieldId.value + "'");
    return it->second;
  }

  const World::GroundField &World::groundField(const TwinId &fieldId) const
  {
    auto it = m_ground.find(fieldId.value);
    if (it == m_ground.end())
      throw Error(ErrorCode::NotFound, "no simulated field '" + fieldId.value + "'");
    return it->second;
  }

  const field::FieldSeed &World::fieldSeed(const TwinId &fieldId) const
  {
    std::lock_guard lock(m_groundMutex);
    return groundField(fieldId).seed;
  }

  double World::nitrogen(const TwinId &fieldId) const
  {
    std::lock_guard lock(m_groundMutex);
    return groundField(fieldId).nitrogenKgHa;
  }

  double World::weedDensity(const TwinId &fieldId) const
  {
    std::lock_guard lock(m_groundMutex);
    return groundField(fieldId).weedDensityPerM2;
  }

  void World::applyWeedControl(const TwinId &fieldId)
  {
    std::lock_guard lock(m_groundMutex);
    groundField(fieldId).weedDensityPerM2 = 0.0;
    advanceLocked();
  }

  void World::applyFertilization(const TwinId &fieldId, double amountKgHa)
  {
    std::lock_guard lock(m_groundMutex);
    GroundField &ground = groundField(fieldId);
    ground.nitrogenKgHa = round6(ground.nitrogenKgHa + amountKgHa);
    m_ledger.push_back({fieldId.value, amountKgHa, m_step.load() + 1});
    advanceLocked();
  }

  void World::advance()
  {
    std::lock_guard lock(m_groundMutex);
    advanceLocked();
  }

  void World::advanceLocked()
  {
    m_step.fetch_add(1);
    if (m_step.load() % m_spec.samplingEveryNSteps == 0)
      sampleSensorsLocked();
  }

  void World::sampleSensorsLocked()
  {
    if (!m_fieldService)
      return;

    std::normal_distribution<double> noise(0.0, m_spec.sensorNoiseStd);
    for (const TwinId &fieldId : {field7Id(), field8Id()})
    {
      auto it = m_ground.find(fieldId.value);
      if (it == m_ground.end())
        continue;

      double nitrogenReading = it->second.nitrogenKgHa;
      double weedReading = it->second.weedDensityPerM2;
      if (m_spec.sensorNoiseStd > 0.0)
      {
        nitrogenReading = std::max(0.0, nitrogenReading + noise(m_rng));
        weedReading = std::max(0.0, weedReading + noise(m_rng));
      }

      try
      {
        m_fieldService->ingestSensorReading(fieldId, SemanticId(ids::kSoilNitrogen),
                                            nitrogenReading, "kg/ha", now());
        m_fieldService->ingestSensorReading(fieldId, SemanticId(ids::kWeedDensity),
                                            weedReading, "1/m2", now());
      }
      catch (const Error &)
      {
        // a stopped twin simply misses this sampling tick
      }
    }
  }

  std::vector<World::FertilizerApplication> World::fertilizerLedger() const
  {
    std::lock_guard lock(m_groundMutex);
    return m_ledger;
  }

  void World::stimulusReplaceSystem(const TwinId &oldSystem, const TwinId &newSystem)
  {
    hub::HubClient client(hubUrl());
    try
    {
      client.lookup(oldSystem);
    }
    catch (const Error &e)
    {
      if (e.code() == ErrorCode::NotFound)
        throw Error(ErrorCode::UnknownSystem,
                    "'" + oldSystem.value + "' is not an active system");
      throw;
    }

    if (!(oldSystem == alphaTwinId()) || !(newSystem == betaTwinId()))
      throw Error(ErrorCode::UnknownSystem,
                  "replacement of '" + oldSystem.value + "' by '" + newSystem.value +
                    "' is not part of this world");

    client.deregisterTwin(oldSystem);
    m_alphaNative->stop();
    m_alphaTwinHttp.stop();

    ShellDescriptor descriptor = m_betaTwin->describe();
    descriptor.endpoint = m_betaTwinHttp.baseUrl();
    client.registerTwin(descriptor, {});
  }

  void World::startAndRegisterFmis()
  {
    const int fmisNativePort = m_spec.basePort + 7;
    const int fmisTwinPort = m_spec.basePort + 12;

    m_fmisNative->start(m_host, fmisNativePort);
    mountTwin(m_fmisTwinHttp.server(), "", m_fmisTwin);
    m_fmisTwinHttp.start(m_host, fmisTwinPort);

    ShellDescriptor descriptor = m_fmisTwin->describe();
    descriptor.endpoint = m_fmisTwinHttp.baseUrl();
    hub::HubClient(hubUrl()).registerTwin(
      descriptor, {{ids::kCropType, hub::TagValue(m_fmisNative->seed().crop)}});
  }
}  // namespace agritwin::sim
