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

#include "agritwin/orchestrator/orchestrator.hpp"
#include "agritwin/sim/recipes.hpp"
#include "agritwin/vocab/ids.hpp"

using namespace agritwin;
using namespace agritwin::orch;

namespace
{
  struct Stage
  {
    std::map<std::string, std::shared_ptr<LocalTwin>> twins;

    void add(const std::shared_ptr<LocalTwin> &twin)
    {
      twins[twin->id().value] = twin;
    }

    Orchestrator::Deps deps(int maxPasses = 100)
    {
      Orchestrator::Deps deps;
      deps.lookupTwin = [this](const TwinId &id) {
        auto it = twins.find(id.value);
        if (it == twins.end())
          throw Error(ErrorCode::NotFound, "twin '" + id.value + "' is not registered");
        return it->second->describe();
      };
      deps.connect = [this](const ShellDescriptor &descriptor) {
        return std::shared_ptr<TwinAccess>(twins.at(descriptor.id.value));
      };
      deps.now = [] { return Timestamp::fromMillis(1770000000000LL); };
      deps.maxPasses = maxPasses;
      return deps;
    }
  };

  // a fertilization stage: shared ground nitrogen, spreader twin, field twin
  struct FertilizationStage : Stage
  {
    double ground = 30.0;
    int passes = 0;

    FertilizationStage()
    {
      Submodel fertilizerwork{"fertilizerwork", SemanticId(ids::kSmFertilizerwork), {}};
      fertilizerwork.elements.push_back(OperationElement{
        "applyFertilizer",
        SemanticId(ids::kOpApplyFertilizer),
        {{"fieldId", Datatype::Text, "1"}, {"amountKgHa", Datatype::Decimal, "kg/ha"}},
        {{"record", Datatype::Text, "1"}}});
      auto spreader = std::make_shared<LocalTwin>(createShell(
        TwinId("urn:t:spreader"), TwinKind::SystemTwin, {std::move(fertilizerwork)}));
      spreader->bindOperation(
        "fertilizerwork/applyFertilizer", [this](const ArgMap &args) {
          ground += std::get<double>(args.at("amountKgHa"));
          ++passes;
          field::JobRecord record;
          record.jobId = "sp-" + std::to_string(passes);
          record.fieldId = TwinId(std::get<std::string>(args.at("fieldId")));
          record.processKind = field::ProcessKind::Fertilization;
          record.executedBy = TwinId("urn:t:spreader");
          record.startedAt = Timestamp::fromMillis(1000 * passes);
          record.finishedAt = Timestamp::fromMillis(1000 * passes + 500);
          record.coveredAreaHa = 12.0;
          record.outputs[ids::kSoilNitrogen] = ground;
          return ArgMap{{"record", field::toJson(record).dump()}};
        });
      add(spreader);

      Submodel agronomic{"agronomic", SemanticId(ids::kSmAgronomic), {}};
      agronomic.elements.push_back(PropertyElement{
        "soilNitrogen", SemanticId(ids::kSoilNitrogen), Datatype::Decimal, "kg/ha",
        30.0, Timestamp::fromMillis(0)});
      agronomic.elements.push_back(OperationElement{"recordWork",
                                                    SemanticId(ids::kOpRecordWork),
                                                    {{"record", Datatype::Text, "1"}},
                                                    {{"accepted", Datatype::Boolean, "1"}}});
      auto fieldTwin = std::make_shared<LocalTwin>(createShell(
        TwinId("urn:t:field"), TwinKind::FieldTwin, {std::move(agronomic)}));
      auto weakField = std::weak_ptr<LocalTwin>(fieldTwin);
      fieldTwin->bindOperation("agronomic/recordWork", [weakField](const ArgMap &args) {
        auto self = weakField.lock();
        field::JobRecord record = field::jobRecordFromJson(
          nlohmann::json::parse(std::get<std::string>(args.at("record"))));
        self->writeProperty("agronomic/soilNitrogen",
                            record.outputs.at(ids::kSoilNitrogen).get<double>(),
                            record.finishedAt);
        return ArgMap{{"accepted", true}};
      });
      add(fieldTwin);
    }
  };
}  // namespace

TEST_CASE("recipes load with deterministic digests and validated references")
{
  std::string bytes = sim::weedControlPotatoRecipe();
  Recipe recipe = loadRecipe(bytes);

  CHECK(recipe.name == "weed-control-potato");
  CHECK(recipe.roles.size() == 3);
  CHECK(recipe.steps.size() == 3);
  CHECK(recipe.definitionDigest == loadRecipe(bytes).definitionDigest);
  CHECK(recipe.definitionDigest !=
        loadRecipe(sim::weedControlSugarBeetRecipe()).definitionDigest);

  std::vector<std::string> roleNames;
  for (const auto &role : recipe.roles)
    roleNames.push_back(role.name);
  CHECK(roleNames ==
        std::vector<std::string>{"routePlanner", "fieldRobot", "field"});

  SUBCASE("malformed definitions")
  {
    CHECK_THROWS_AS(loadRecipe("not json at all"), Error);
    CHECK_THROWS_AS(loadRecipe("{\"name\": \"x\"}"), Error);
  }

  SUBCASE("steps must reference declared roles")
  {
    nlohmann::json bad = nlohmann::json::parse(bytes);
    bad["steps"][1]["role"] = "harvester";
    try
    {
      loadRecipe(bad.dump());
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::DanglingRoleReference);
    }
  }

  SUBCASE("dataflow may only reference earlier steps")
  {
    nlohmann::json bad = nlohmann::json::parse(bytes);
    bad["steps"][0]["args"]["crop"] = {{"step", 2}, {"output", "record"}};
    try
    {
      loadRecipe(bad.dump());
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::ParseError);
    }
  }
}

TEST_CASE("role binding checks interface conformance structurally")
{
  FertilizationStage stage;
  Orchestrator orchestrator(stage.deps());
  Recipe recipe = loadRecipe(sim::fertilizationRecipe());

  SUBCASE("conformant bindings pass and leave the recipe untouched")
  {
    std::string digest = recipe.definitionDigest;
    BoundRecipe bound = orchestrator.bindRoles(
      recipe,
      {{"spreader", TwinId("urn:t:spreader")}, {"field", TwinId("urn:t:field")}});
    CHECK(bound.recipe.definitionDigest == digest);
  }

  SUBCASE("unbound roles are reported")
  {
    try
    {
      orchestrator.bindRoles(recipe, {{"spreader", TwinId("urn:t:spreader")}});
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::UnboundRole);
    }
  }

  SUBCASE("nonconformant twins are rejected with the missing submodels listed")
  {
    try
    {
      // the field twin lacks the fertilizerwork submodel
      orchestrator.bindRoles(
        recipe,
        {{"spreader", TwinId("urn:t:field")}, {"field", TwinId("urn:t:field")}});
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::NonconformantTwin);
      CHECK(e.detail().find(ids::kSmFertilizerwork) != std::string::npos);
    }
  }
}

TEST_CASE("run executes steps in order and returns the job record")
{
  FertilizationStage stage;
  Orchestrator orchestrator(stage.deps());
  Recipe recipe = loadRecipe(sim::fertilizationRecipe());
  BoundRecipe bound = orchestrator.bindRoles(
    recipe, {{"spreader", TwinId("urn:t:spreader")}, {"field", TwinId("urn:t:field")}});

  field::JobRecord record = orchestrator.run(bound);
  CHECK(record.processKind == field::ProcessKind::Fertilization);
  CHECK(record.executedBy.value == "urn:t:spreader");
  CHECK(record.fieldId.value == "urn:t:field");
  CHECK(stage.ground == 40.0);
  // write-back happened through the field twin's own operation
  CHECK(std::get<double>(stage.twins.at("urn:t:field")
                           ->readProperty("agronomic/soilNitrogen")
                           .value) == 40.0);

  SUBCASE("a dead downstream fails with the step index, no partial write-back")
  {
    stage.twins.at("urn:t:spreader")
      ->bindOperation("fertilizerwork/applyFertilizer", [](const ArgMap &) -> ArgMap {
        throw Error(ErrorCode::DownstreamUnavailable, "robot powered off");
      });
    double before = std::get<double>(
      stage.twins.at("urn:t:field")->readProperty("agronomic/soilNitrogen").value);
    try
    {
      orchestrator.run(bound);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::DownstreamUnavailable);
      CHECK(e.detail().find("step 0") != std::string::npos);
    }
    CHECK(std::get<double>(stage.twins.at("urn:t:field")
                             ->readProperty("agronomic/soilNitrogen")
                             .value) == before);
  }

  SUBCASE("argument errors carry the step context")
  {
    nlohmann::json bad = nlohmann::json::parse(sim::fertilizationRecipe());
    bad["name"] = "fertilization-bad";
    bad["steps"][0]["args"]["amountKgHa"] = {{"lit", "a lot"}};
    Recipe badRecipe = loadRecipe(bad.dump());
    BoundRecipe badBound = orchestrator.bindRoles(
      badRecipe,
      {{"spreader", TwinId("urn:t:spreader")}, {"field", TwinId("urn:t:field")}});
    try
    {
      orchestrator.run(badBound);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::StepArgumentError);
    }
  }
}

TEST_CASE("triggers run the registered process recipe until the target is reached")
{
  FertilizationStage stage;
  Orchestrator orchestrator(stage.deps());
  orchestrator.registerRecipe(loadRecipe(sim::fertilizationRecipe()));
  orchestrator.setProcessDefaults(field::ProcessKind::Fertilization, "fertilization",
                                  {{"spreader", TwinId("urn:t:spreader")}});

  field::ProcessTrigger trigger;
  trigger.triggerId = "trig-1";
  trigger.processKind = field::ProcessKind::Fertilization;
  trigger.fieldId = TwinId("urn:t:field");
  trigger.targetSemanticId = SemanticId(ids::kSoilNitrogen);
  trigger.targetValue = 60.0;
  trigger.issuedAt = Timestamp::fromMillis(0);

  field::JobRecord last = orchestrator.handleTrigger(trigger);
  CHECK(stage.passes == 3);  // 30 -> 40 -> 50 -> 60 at +10 per pass
  CHECK(stage.ground == 60.0);
  CHECK(last.outputs.at(ids::kSoilNitrogen).get<double>() == 60.0);

  SUBCASE("redelivery of the same trigger id is idempotent")
  {
    field::JobRecord replay = orchestrator.handleTrigger(trigger);
    CHECK(stage.passes == 3);
    CHECK(field::toJson(replay) == field::toJson(last));
  }

  SUBCASE("unknown process kinds have no recipe")
  {
    field::ProcessTrigger unknown = trigger;
    unknown.triggerId = "trig-2";
    unknown.processKind = field::ProcessKind::WeedControl;
    try
    {
      orchestrator.handleTrigger(unknown);
      CHECK(false);
    }
    catch (const Error &e)
    {
      CHECK(e.code() == ErrorCode::NoRecipeForProcess);
    }
  }
}

TEST_CASE("unreachable targets stop at the pass bound")
{
  FertilizationStage stage;
  Orchestrator orchestrator(stage.deps(5));
  orchestrator.registerRecipe(loadRecipe(sim::fertilizationRecipe()));
  orchestrator.setProcessDefaults(field::ProcessKind::Fertilization, "fertilization",
                                  {{"spreader", TwinId("urn:t:spreader")}});

  field::ProcessTrigger trigger;
  trigger.triggerId = "trig-far";
  trigger.processKind = field::ProcessKind::Fertilization;
  trigger.fieldId = TwinId("urn:t:field");
  trigger.targetSemanticId = SemanticId(ids::kSoilNitrogen);
  trigger.targetValue = 1e6;
  trigger.issuedAt = Timestamp::fromMillis(0);

  try
  {
    orchestrator.handleTrigger(trigger);
    CHECK(false);
  }
  catch (const Error &e)
  {
    CHECK(e.code() == ErrorCode::TargetUnreachable);
  }
  CHECK(stage.passes == 5);
}
