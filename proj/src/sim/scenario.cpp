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

#include "agritwin/sim/scenario.hpp"

#include "agritwin/core/errors.hpp"
#include "agritwin/core/geometry.hpp"
#include "agritwin/core/http_twin.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/vocab/ids.hpp"

namespace agritwin::sim
{
  using nlohmann::json;

  nlohmann::json toJson(const ScenarioReport &report)
  {
    json clauses = json::array();
    for (const auto &clause : report.clauses)
      clauses.push_back({{"clause", clause.clause},
                         {"expected", clause.expected},
                         {"observed", clause.observed},
                         {"pass", clause.pass}});
    return {{"name", report.name},
            {"seed", report.seed},
            {"cast", report.cast},
            {"pass", report.pass},
            {"clauses", std::move(clauses)}};
  }

  namespace
  {
    void addClause(ScenarioReport &report, const std::string &clause,
                   std::string expected, std::string observed)
    {
      bool pass = expected == observed;
      report.clauses.push_back(
        {clause, std::move(expected), std::move(observed), pass});
    }

    std::string errorCodeOf(const std::function<void()> &call)
    {
      try
      {
        call();
        return "no error";
      }
      catch (const Error &e)
      {
        return toString(e.code());
      }
    }

    /// Raw vendor call used to prove wire incompatibility; returns the HTTP
    /// status, or 0 on transport failure.
    int rawStatus(const std::string &baseUrl, const std::string &method,
                  const std::string &path, const json *body)
    {
      httplib::Client client(baseUrl);
      client.set_connection_timeout(std::chrono::seconds(5));
      client.set_read_timeout(std::chrono::seconds(5));
      httplib::Result result =
        method == "GET"
          ? client.Get(path)
          : client.Post(path, body ? body->dump() : "{}", "application/json");
      return result ? result->status : 0;
    }

    bool conforms(const ShellDescriptor &descriptor,
                  const std::vector<std::string> &requiredSubmodels)
    {
      std::set<std::string> offered;
      for (const auto &submodel : descriptor.submodels)
        offered.insert(submodel.semanticId.value);
      for (const auto &required : requiredSubmodels)
        if (!offered.count(required))
          return false;
      return true;
    }

    ScenarioReport runAdiop1(World &world)
    {
      ScenarioReport report;

      // Premise: the two vendor APIs reject each other's calls outright.
      json alphaJobBody = {{"route", json::array({json::array({7.75, 49.44})})},
                           {"crop", "potato"},
                           {"field_ref", world.field7Id().value}};
      json betaJobBody = {{"waypoints", json::array({{{"lon", 7.75}, {"lat", 49.44}}})},
                          {"cropKind", "potato"},
                          {"fieldRef", world.field7Id().value}};
      const std::string alphaUrl = world.alphaNative().baseUrl();
      const std::string betaUrl = world.betaNative().baseUrl();

      int rejected = 0, attempts = 0;
      auto attempt = [&](const std::string &base, const std::string &method,
                         const std::string &path, const json *body) {
        ++attempts;
        int status = rawStatus(base, method, path, body);
        if (status == 0 || status >= 400)
          ++rejected;
      };
      attempt(betaUrl, "GET", "/rpc/get_status", nullptr);
      attempt(betaUrl, "POST", "/rpc/execute_job", &alphaJobBody);
      attempt(betaUrl, "POST", "/api/v2/jobs", &alphaJobBody);
      attempt(alphaUrl, "GET", "/api/v2/telemetry", nullptr);
      attempt(alphaUrl, "POST", "/rpc/execute_job", &betaJobBody);
      attempt(alphaUrl, "POST", "/api/v2/jobs", &betaJobBody);
      addClause(report, "native robot APIs are wire-incompatible",
                std::to_string(attempts) + "/" + std::to_string(attempts) +
                  " cross-vendor calls rejected",
                std::to_string(rejected) + "/" + std::to_string(attempts) +
                  " cross-vendor calls rejected");

      // Both twins expose the same standardized interface regardless.
      orch::Recipe recipe = world.orchestrator()->recipe("weed-control-potato");
      std::vector<std::string> robotRequires;
      for (const auto &role : recipe.roles)
        if (role.name == "fieldRobot")
          for (const auto &id : role.requiredSubmodels)
            robotRequires.push_back(id.value);
      bool alphaConforms =
        conforms(HttpTwin(world.alphaTwinEndpoint()).describe(), robotRequires);
      bool betaConforms =
        conforms(HttpTwin(world.betaTwinEndpoint()).describe(), robotRequires);
      addClause(report, "both robot twins pass the same conformance check",
                "alpha=conformant beta=conformant",
                std::string("alpha=") + (alphaConforms ? "conformant" : "nonconformant") +
                  " beta=" + (betaConforms ? "conformant" : "nonconformant"));

      const std::string digestBefore = recipe.definitionDigest;
      const std::string nonceBefore = world.orchestrator()->instanceNonce();

      orch::OrchestratorClient operationSystem(world.orchestratorUrl());
      field::JobRecord recordAlpha = operationSystem.run(
        "weed-control-potato", {{"routePlanner", world.plannerTwinId()},
                                {"fieldRobot", world.alphaTwinId()},
                                {"field", world.field7Id()}});
      addClause(report, "process P runs with robot-alpha",
                "executedBy=" + world.alphaTwinId().value + " coveredArea>0",
                "executedBy=" + recordAlpha.executedBy.value +
                  (recordAlpha.coveredAreaHa > 0 ? " coveredArea>0" : " coveredArea=0"));

      // Stimulus: the service provider replaces Sys_2 with Sys_3.
      world.stimulusReplaceSystem(world.alphaTwinId(), world.betaTwinId());

      std::string alphaLookup = errorCodeOf(
        [&] { hub::HubClient(world.hubUrl()).lookup(world.alphaTwinId()); });
      std::string betaLookup = errorCodeOf(
        [&] { hub::HubClient(world.hubUrl()).lookup(world.betaTwinId()); });
      addClause(report, "registry reflects the system swap",
                "alpha=NotFound beta=no error",
                "alpha=" + alphaLookup + " beta=" + betaLookup);

      field::JobRecord recordBeta = operationSystem.run(
        "weed-control-potato", {{"routePlanner", world.plannerTwinId()},
                                {"fieldRobot", world.betaTwinId()},
                                {"field", world.field7Id()}});

      const std::string digestAfter =
        world.orchestrator()->recipe("weed-control-potato").definitionDigest;
      addClause(report,
                "no modification at design time: recipe digest is byte-identical",
                digestBefore, digestAfter);
      addClause(report, "orchestrator instance was not redeployed", nonceBefore,
                world.orchestrator()->instanceNonce());

      addClause(report, "normalized job records are equal across vendors",
                field::normalizedRecordJson(recordAlpha).dump(),
                field::normalizedRecordJson(recordBeta).dump());

      TimeSeries history = world.fieldService().workHistory(world.field7Id());
      bool ordered = true;
      for (std::size_t i = 1; i < history.samples.size(); ++i)
        if (history.samples[i].at < history.samples[i - 1].at)
          ordered = false;
      std::string jobOrder;
      for (const auto &sample : history.samples)
        jobOrder += sample.value.value("jobId", "?") + ";";
      addClause(report, "field twin work history reflects both runs in order",
                recordAlpha.jobId + ";" + recordBeta.jobId + "; ordered",
                jobOrder + (ordered ? " ordered" : " out-of-order"));

      return report;
    }

    ScenarioReport runAdiop2(World &world)
    {
      ScenarioReport report;
      RecommendationService &s1 = world.frs();

      const std::string configBefore = s1.configDigest();
      const std::string codeBefore = s1.codeDigest();

      // Environment: without the new FMIS there is no sugar-beet data source.
      std::string discovery = errorCodeOf([&] { s1.recommend("sugar beet"); });
      addClause(report, "before the stimulus S_1 finds no sugar-beet field data",
                "NotFound", discovery);

      // Stimulus: the new FMIS enters the market and the farmer grants
      // one-time access.
      world.startAndRegisterFmis();
      mediator::Grant grant;
      grant.grantor = "farmer-1";
      grant.subject = s1.config().principal;
      grant.twin = world.fmisTwinId();
      for (const auto &item : s1.config().items)
        grant.items.emplace_back(item);
      grant.scope = mediator::GrantScope::OneTime;
      mediator::MediatorClient(world.mediatorUrl()).registerGrant(grant);

      RecommendationService::Outcome outcome = s1.recommend("sugar beet");
      addClause(report, "S_1 receives the field data from the new FMIS",
                "source=" + world.fmisTwinId().value + " status=Delivered",
                "source=" + outcome.sourceTwin + " status=" + outcome.receiptStatus);

      // Understanding: the delivered values support the recommendation
      // arithmetic (target 80 kg/ha for sugar beet, FMIS reports 30 kg/ha).
      json expectedUnderstanding = {{"currentNitrogenKgHa", 30.0},
                                    {"recommendationKgHa", 50.0},
                                    {"fieldAreaPositive", true}};
      json observedUnderstanding = {{"currentNitrogenKgHa", outcome.currentNitrogenKgHa},
                                    {"recommendationKgHa", outcome.recommendationKgHa},
                                    {"fieldAreaPositive", outcome.fieldAreaHa > 0.0}};
      addClause(report, "S_1 understands the field data",
                expectedUnderstanding.dump(), observedUnderstanding.dump());

      // The inbox holds exactly the requested items with the source values.
      HttpTwin fmis(world.fmisTwinEndpoint());
      json expectedItems = json::object();
      expectedItems[ids::kCropType] =
        toJson(fmis.readProperty("fielddata/cropType").value);
      expectedItems[ids::kFieldBoundaries] =
        toJson(fmis.readProperty("fielddata/fieldBoundaries").value);
      expectedItems[ids::kSoilNitrogen] =
        toJson(fmis.readProperty("fielddata/soilNitrogen").value);

      json observedItems = json::object();
      int inboxCount = 0;
      ShellDescriptor s1Shape = s1.twin()->describe();
      for (const auto &submodel : s1Shape.submodels)
      {
        if (submodel.shortName != kInboxSubmodel)
          continue;
        for (const auto &element : submodel.elements)
        {
          ++inboxCount;
          observedItems[element.semanticId.value] = toJson(
            s1.twin()->readProperty(joinPath(kInboxSubmodel, element.shortName)).value);
        }
      }
      addClause(report, "destination inbox gains exactly the requested items",
                "3 items: " + expectedItems.dump(),
                std::to_string(inboxCount) + " items: " + observedItems.dump());

      addClause(report, "no modification at design time in S_1 (config digest)",
                configBefore, s1.configDigest());
      addClause(report, "no modification at design time in S_1 (code digest)",
                codeBefore, s1.codeDigest());

      std::string secondAttempt = errorCodeOf([&] { s1.recommend("sugar beet"); });
      addClause(report, "one-time grant is consumed after exactly one exchange",
                "AccessNotGranted", secondAttempt);

      // Replaying the command id returns the stored receipt byte-for-byte.
      mediator::ExchangeCommand replay;
      replay.commandId = outcome.commandId;
      replay.sourceTwin = world.fmisTwinId();
      replay.destinationTwin = s1.twinId();
      for (const auto &item : s1.config().items)
        replay.items.emplace_back(item);
      replay.requestedBy = s1.config().principal;

      mediator::MediatorClient mediatorClient(world.mediatorUrl());
      std::string storedBytes = mediatorClient.receiptBytes(outcome.commandId);
      std::string replayBytes = mediatorClient.submitExchangeBytes(replay);
      addClause(report, "replaying the command id yields a byte-identical receipt",
                storedBytes, replayBytes);

      return report;
    }

    ScenarioReport runClosedLoop(World &world)
    {
      ScenarioReport report;
      const TwinId fieldId = world.field7Id();
      const double initial = world.nitrogen(fieldId);
      const double target = 60.0;
      const double stepSize = world.spec().fertilizerStepKgHa;

      auto twinNitrogen = [&]() -> double {
        auto data = world.fieldService().readFieldData(
          fieldId, {SemanticId(ids::kSoilNitrogen)});
        return std::get<double>(data.at(ids::kSoilNitrogen).value);
      };

      addClause(report, "initial state: ground truth and twin agree at 30 kg/ha",
                json({{"groundTruth", 30.0}, {"twin", 30.0}}).dump(),
                json({{"groundTruth", initial}, {"twin", twinNitrogen()}}).dump());

      // raising the target on the digital twin triggers the real process
      HttpTwin fieldTwin(world.hub().endpointFor(fieldId),
                         std::chrono::seconds(60));
      ArgMap outputs = fieldTwin.invokeOperation(
        "agronomic/setTarget", {{"semanticId", std::string(ids::kSoilNitrogen)},
                                {"targetValue", target}});
      json trigger = json::parse(std::get<std::string>(outputs.at("trigger")));
      addClause(report, "setTarget emits a fertilization trigger",
                json({{"processKind", "fertilization"}, {"targetValue", target}}).dump(),
                json({{"processKind", trigger.value("processKind", "?")},
                      {"targetValue", trigger.value("targetValue", 0.0)}})
                  .dump());

      auto ledger = world.fertilizerLedger();
      double applied = 0.0;
      bool allOnField = true, allStepSized = true;
      for (const auto &application : ledger)
      {
        applied += application.amountKgHa;
        allOnField = allOnField && application.fieldId == fieldId.value;
        allStepSized = allStepSized && application.amountKgHa == stepSize;
      }
      int expectedPasses = static_cast<int>(std::ceil((target - initial) / stepSize));
      addClause(report, "exactly the required number of fertilization passes ran",
                json({{"passes", expectedPasses},
                      {"perPass", stepSize},
                      {"onTriggeredField", true}})
                  .dump(),
                json({{"passes", ledger.size()},
                      {"perPass", allStepSized ? stepSize : -1.0},
                      {"onTriggeredField", allOnField}})
                  .dump());

      addClause(report, "ground truth reached the target",
                json({{"nitrogen", target}}).dump(),
                json({{"nitrogen", world.nitrogen(fieldId)}}).dump());

      addClause(report, "twin equals ground truth after the sampling tick",
                json({{"twin", world.nitrogen(fieldId)}}).dump(),
                json({{"twin", twinNitrogen()}}).dump());

      // conservation: ground truth moved only by the ledgered applications
      addClause(report, "nitrogen changed only by the sum of applications",
                json({{"initialPlusApplied", initial + applied}}).dump(),
                json({{"initialPlusApplied", world.nitrogen(fieldId)}}).dump());

      // the twin's work history tracks the ground-truth trace pass by pass
      json groundTrace = json::array();
      double level = initial;
      for (const auto &application : ledger)
      {
        level = round6(level + application.amountKgHa);
        groundTrace.push_back(level);
      }
      json twinTrace = json::array();
      for (const auto &sample :
           world.fieldService().workHistory(fieldId).samples)
      {
        const json &record = sample.value;
        if (record.value("processKind", "") == "fertilization")
          twinTrace.push_back(record.at("outputs").at(ids::kSoilNitrogen));
      }
      addClause(report, "twin trace equals simulated ground-truth trace",
                groundTrace.dump(), twinTrace.dump());

      return report;
    }
  }  // namespace

  ScenarioReport runScenario(World &world)
  {
    ScenarioReport report;
    if (world.spec().name == "adiop1")
      report = runAdiop1(world);
    else if (world.spec().name == "adiop2")
      report = runAdiop2(world);
    else if (world.spec().name == "closedloop")
      report = runClosedLoop(world);
    else
      throw Error(ErrorCode::ScenarioUnknown,
                  "no scenario named '" + world.spec().name + "'");

    report.name = world.spec().name;
    report.seed = world.spec().seed;
    report.cast = world.spec().cast;
    report.pass = !report.clauses.empty();
    for (const auto &clause : report.clauses)
      report.pass = report.pass && clause.pass;
    return report;
  }
}  // namespace agritwin::sim
