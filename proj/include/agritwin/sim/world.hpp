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
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "agritwin/field/field_twin.hpp"
#include "agritwin/hub/twin_hub.hpp"
#include "agritwin/mediator/mediator.hpp"
#include "agritwin/orchestrator/orchestrator.hpp"
#include "agritwin/sim/frs.hpp"
#include "agritwin/sim/natives.hpp"

namespace agritwin::sim
{
  /// Scenario selector plus the deterministic seed and config overrides.
  /// Every paper-cast role maps to exactly one simulated component.
  struct ScenarioSpec
  {
    std::string name;  // adiop1 | adiop2 | closedloop
    std::uint64_t seed = 1;
    std::map<std::string, std::string> cast;

    int basePort = 7800;
    std::string dataDir;
    double fertilizerStepKgHa = 10.0;
    int samplingEveryNSteps = 1;
    double sensorNoiseStd = 0.0;

    /// Throws Error{ScenarioUnknown}.
    static ScenarioSpec forName(const std::string &name, std::uint64_t seed = 1);

    /// File format: {"name", "seed", "overrides": {...}}.
    static ScenarioSpec fromJson(const nlohmann::json &value);

    void validate() const;
  };

  nlohmann::json toJson(const ScenarioSpec &spec);

  // Canonical sim fields; the files under fixtures/fields/ carry the same
  // content.
  field::FieldSeed field7Seed();  // potato
  field::FieldSeed field8Seed();  // sugar beet
  field::FieldSeed field9Seed();  // sugar beet, managed by the new FMIS

  /// The whole cast wired up: ground truth + clock, hub, mediator,
  /// orchestrator, vendor natives and their adapter twins, and S_1.
  /// Simulated time advances one step per applied process; sensors sample
  /// the ground truth into the hosted field twins on each step.
  class World : public GroundTruthAccess
  {
  public:
    explicit World(ScenarioSpec spec, std::string host = "127.0.0.1");
    ~World();

    /// Throws Error{PortInUse}.
    void start();
    void stop();

    const ScenarioSpec &spec() const { return m_spec; }

    // GroundTruthAccess
    Timestamp now() const override;
    const field::FieldSeed &fieldSeed(const TwinId &fieldId) const override;
    double nitrogen(const TwinId &fieldId) const override;
    double weedDensity(const TwinId &fieldId) const override;
    void applyWeedControl(const TwinId &fieldId) override;
    void applyFertilization(const TwinId &fieldId, double amountKgHa) override;

    int step() const { return m_step.load(); }
    void advance();

    struct FertilizerApplication
    {
      std::string fieldId;
      double amountKgHa = 0.0;
      int atStep = 0;
    };
    std::vector<FertilizerApplication> fertilizerLedger() const;

    // component access
    hub::TwinHub &hub() { return *m_hub; }
    field::FieldTwinService &fieldService() { return *m_fieldService; }
    std::shared_ptr<orch::Orchestrator> orchestrator() { return m_orchestrator; }
    std::shared_ptr<mediator::Mediator> mediatorCore() { return m_mediator; }
    RecommendationService &frs() { return *m_frs; }

    std::string hubUrl() const;
    std::string mediatorUrl() const;
    std::string orchestratorUrl() const;

    AlphaRobotNative &alphaNative() { return *m_alphaNative; }
    BetaRobotNative &betaNative() { return *m_betaNative; }
    std::string alphaTwinEndpoint() const;
    std::string betaTwinEndpoint() const;
    std::string fmisTwinEndpoint() const;

    TwinId alphaTwinId() const { return TwinId("urn:agritwin:sys:robot-alpha"); }
    TwinId betaTwinId() const { return TwinId("urn:agritwin:sys:robot-beta"); }
    TwinId plannerTwinId() const { return TwinId("urn:agritwin:sys:planner-1"); }
    TwinId spreaderTwinId() const { return TwinId("urn:agritwin:sys:spreader-1"); }
    TwinId fmisTwinId() const { return TwinId("urn:agritwin:sys:fmis-nova"); }
    TwinId field7Id() const { return TwinId("urn:agritwin:field:field-7"); }
    TwinId field8Id() const { return TwinId("urn:agritwin:field:field-8"); }

    /// Table-1 stimulus: the old system is deregistered and stopped, the new
    /// one registered; nothing else is touched. Throws Error{UnknownSystem}.
    void stimulusReplaceSystem(const TwinId &oldSystem, const TwinId &newSystem);

    /// Table-2 stimulus: the new FMIS comes online and is registered at
    /// runtime, long after the mediator and S_1 started.
    void startAndRegisterFmis();

  private:
    struct GroundField
    {
      field::FieldSeed seed;
      double nitrogenKgHa = 0.0;
      double weedDensityPerM2 = 0.0;
    };

    void advanceLocked();
    void sampleSensorsLocked();
    GroundField &groundField(const TwinId &fieldId);
    const GroundField &groundField(const TwinId &fieldId) const;

    ScenarioSpec m_spec;
    std::string m_host;
    bool m_ownsDataDir = false;
    bool m_started = false;

    std::shared_ptr<vocab::Vocabulary> m_vocabulary;
    std::unique_ptr<hub::TwinHub> m_hub;
    std::unique_ptr<field::FieldTwinService> m_fieldService;

    std::shared_ptr<mediator::Mediator> m_mediator;
    HttpService m_mediatorHttp;
    std::shared_ptr<orch::Orchestrator> m_orchestrator;
    HttpService m_orchestratorHttp;

    std::unique_ptr<AlphaRobotNative> m_alphaNative;
    std::unique_ptr<BetaRobotNative> m_betaNative;
    std::unique_ptr<RoutePlannerNative> m_plannerNative;
    std::unique_ptr<SpreaderNative> m_spreaderNative;
    std::unique_ptr<FmisNative> m_fmisNative;

    std::shared_ptr<AdaptedTwin> m_alphaTwin;
    std::shared_ptr<AdaptedTwin> m_betaTwin;
    std::shared_ptr<AdaptedTwin> m_plannerTwin;
    std::shared_ptr<AdaptedTwin> m_spreaderTwin;
    std::shared_ptr<AdaptedTwin> m_fmisTwin;
    HttpService m_alphaTwinHttp;
    HttpService m_betaTwinHttp;
    HttpService m_plannerTwinHttp;
    HttpService m_spreaderTwinHttp;
    HttpService m_fmisTwinHttp;

    std::unique_ptr<RecommendationService> m_frs;

    mutable std::mutex m_groundMutex;
    std::map<std::string, GroundField> m_ground;
    std::atomic<int> m_step{0};
    std::mt19937_64 m_rng;
    std::vector<FertilizerApplication> m_ledger;
  };
}  // namespace agritwin::sim
