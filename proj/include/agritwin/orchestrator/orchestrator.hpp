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

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agritwin/core/http_service.hpp"
#include "agritwin/core/twin_access.hpp"
#include "agritwin/field/field_twin.hpp"

namespace agritwin::orch
{
  struct RoleSpec
  {
    std::string name;
    std::vector<SemanticId> requiredSubmodels;
  };

  /// How one step argument gets its value.
  struct ArgBinding
  {
    enum class Kind
    {
      Literal,     // {"lit": <json>}
      StepOutput,  // {"step": i, "output": name}
      FieldRead,   // {"read": {"role": r, "semanticId": id}}
      RoleId       // {"roleId": r} -> the bound twin id as text
    };

    Kind kind = Kind::Literal;
    nlohmann::json literal;
    std::size_t stepIndex = 0;
    std::string outputName;
    std::string role;
    SemanticId semanticId;
  };

  struct Step
  {
    std::string role;
    std::string operationPath;  // "submodel/operation" on the bound twin
    std::map<std::string, ArgBinding> args;
  };

  /// Declarative process description with late-bound roles. The digest is a
  /// pure function of the definition bytes, which makes "no modification at
  /// design time" checkable as digest equality.
  struct Recipe
  {
    std::string name;
    std::string cropType;
    std::vector<RoleSpec> roles;
    std::vector<Step> steps;
    std::string definitionDigest;
  };

  /// Throws Error{ParseError | DanglingRoleReference}.
  Recipe loadRecipe(const std::string &definitionBytes);
  nlohmann::json toJson(const Recipe &recipe);

  struct BoundRecipe
  {
    Recipe recipe;
    std::map<std::string, TwinId> bindings;  // roleName -> twin
  };

  class Orchestrator
  {
  public:
    struct Deps
    {
      std::function<ShellDescriptor(const TwinId &)> lookupTwin;
      std::function<std::shared_ptr<TwinAccess>(const ShellDescriptor &)> connect;
      std::function<Timestamp()> now;
      int maxPasses = 100;
    };

    explicit Orchestrator(Deps deps);

    void registerRecipe(Recipe recipe);
    Recipe recipe(const std::string &name) const;  // throws Error{NotFound}
    std::vector<std::string> recipeNames() const;

    /// Default role bindings used when a process trigger arrives. The field
    /// role is always rebound to the triggering field twin.
    void setProcessDefaults(field::ProcessKind kind, const std::string &recipeName,
                            std::map<std::string, TwinId> bindings,
                            std::string fieldRole = "field");

    /// Interface conformance: the bound twin's descriptor must contain every
    /// required submodel semantic id of the role.
    /// Throws Error{UnboundRole | NonconformantTwin}.
    BoundRecipe bindRoles(const Recipe &recipe,
                          const std::map<std::string, TwinId> &bindings) const;

    /// Executes steps in order and returns the job record produced by the
    /// run. Throws Error{DownstreamUnavailable | StepArgumentError}.
    field::JobRecord run(const BoundRecipe &bound);

    /// Runs the registered recipe for the trigger's process until the target
    /// is reached. Redelivered trigger ids return the first result.
    /// Throws Error{NoRecipeForProcess | TargetUnreachable}.
    field::JobRecord handleTrigger(const field::ProcessTrigger &trigger);

    /// Changes per started instance; lets scenarios prove the orchestrator
    /// was not redeployed across a stimulus.
    const std::string &instanceNonce() const { return m_nonce; }

  private:
    std::shared_ptr<std::mutex> twinRunLock(const TwinId &id);

    Deps m_deps;
    std::string m_nonce;

    mutable std::mutex m_recipesMutex;
    std::map<std::string, Recipe> m_recipes;

    struct ProcessDefaults
    {
      std::string recipeName;
      std::map<std::string, TwinId> bindings;
      std::string fieldRole;
    };
    std::map<std::string, ProcessDefaults> m_processDefaults;  // by process kind

    std::mutex m_runLocksMutex;
    std::map<std::string, std::shared_ptr<std::mutex>> m_runLocks;

    std::mutex m_triggersMutex;
    std::map<std::string, std::string> m_handledTriggers;  // triggerId -> record JSON
  };

  /// HTTP surface:
  ///   POST /recipes            definition bytes -> {name, digest}
  ///   GET  /recipes/{name}
  ///   POST /runs               {recipe, bindings} -> {runId, record}
  ///   GET  /runs/{id}
  ///   POST /triggers           ProcessTrigger -> {record}
  void mountOrchestrator(httplib::Server &server,
                         std::shared_ptr<Orchestrator> orchestrator);

  Orchestrator::Deps hubBackedDeps(const std::string &hubUrl,
                                   std::function<Timestamp()> now,
                                   std::chrono::milliseconds timeout = std::chrono::seconds(5),
                                   int maxPasses = 100);

  class OrchestratorClient
  {
  public:
    explicit OrchestratorClient(std::string url,
                                std::chrono::milliseconds timeout = std::chrono::seconds(60));

    std::string registerRecipe(const std::string &definitionBytes) const;  // -> digest
    field::JobRecord run(const std::string &recipeName,
                         const std::map<std::string, TwinId> &bindings) const;
    field::JobRecord deliverTrigger(const field::ProcessTrigger &trigger) const;

  private:
    nlohmann::json request(const std::string &path, const nlohmann::json &body) const;

    std::string m_url;
    std::chrono::milliseconds m_timeout;
  };
}  // namespace agritwin::orch
