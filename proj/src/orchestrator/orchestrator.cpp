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

#include "agritwin/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <set>

#include "agritwin/core/digest.hpp"
#include "agritwin/core/errors.hpp"
#include "agritwin/core/http_twin.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/hub/twin_hub.hpp"

namespace agritwin::orch
{
  namespace
  {
    ArgBinding bindingFromJson(const nlohmann::json &value)
    {
      if (!value.is_object())
        throw Error(ErrorCode::ParseError, "argument binding must be an object");

      ArgBinding binding;
      if (value.contains("lit"))
      {
        binding.kind = ArgBinding::Kind::Literal;
        binding.literal = value.at("lit");
      }
      else if (value.contains("step"))
      {
        binding.kind = ArgBinding::Kind::StepOutput;
        binding.stepIndex = value.at("step").get<std::size_t>();
        binding.outputName = value.at("output").get<std::string>();
      }
      else if (value.contains("read"))
      {
        binding.kind = ArgBinding::Kind::FieldRead;
        binding.role = value.at("read").at("role").get<std::string>();
        binding.semanticId =
          SemanticId(value.at("read").at("semanticId").get<std::string>());
      }
      else if (value.contains("roleId"))
      {
        binding.kind = ArgBinding::Kind::RoleId;
        binding.role = value.at("roleId").get<std::string>();
      }
      else
      {
        throw Error(ErrorCode::ParseError,
                    "argument binding needs one of lit/step/read/roleId");
      }
      return binding;
    }

    nlohmann::json bindingToJson(const ArgBinding &binding)
    {
      switch (binding.kind)
      {
        case ArgBinding::Kind::Literal:
          return {{"lit", binding.literal}};
        case ArgBinding::Kind::StepOutput:
          return {{"step", binding.stepIndex}, {"output", binding.outputName}};
        case ArgBinding::Kind::FieldRead:
          return {{"read",
                   {{"role", binding.role}, {"semanticId", binding.semanticId.value}}}};
        case ArgBinding::Kind::RoleId:
          return {{"roleId", binding.role}};
      }
      return {};
    }
  }  // namespace

  Recipe loadRecipe(const std::string &definitionBytes)
  {
    nlohmann::json definition = nlohmann::json::parse(definitionBytes, nullptr, false);
    if (definition.is_discarded() || !definition.is_object())
      throw Error(ErrorCode::ParseError, "recipe definition is not a JSON object");

    Recipe recipe;
    try
    {
      recipe.name = definition.at("name").get<std::string>();
      recipe.cropType = definition.value("cropType", std::string());
      for (const auto &roleJson : definition.at("roles"))
      {
        RoleSpec role;
        role.name = roleJson.at("name").get<std::string>();
        for (const auto &id : roleJson.value("requires", nlohmann::json::array()))
          role.requiredSubmodels.emplace_back(id.get<std::string>());
        recipe.roles.push_back(std::move(role));
      }
      for (const auto &stepJson : definition.at("steps"))
      {
        Step step;
        step.role = stepJson.at("role").get<std::string>();
        step.operationPath = stepJson.at("op").get<std::string>();
        nlohmann::json argsJson = stepJson.value("args", nlohmann::json::object());
        for (const auto &[argName, bindingJson] : argsJson.items())
          step.args[argName] = bindingFromJson(bindingJson);
        recipe.steps.push_back(std::move(step));
      }
    }
    catch (const nlohmann::json::exception &e)
    {
      throw Error(ErrorCode::ParseError, e.what());
    }

    std::set<std::string> roleNames;
    for (const auto &role : recipe.roles)
      roleNames.insert(role.name);

    for (std::size_t i = 0; i < recipe.steps.size(); ++i)
    {
      const Step &step = recipe.steps[i];
      if (!roleNames.count(step.role))
        throw Error(ErrorCode::DanglingRoleReference,
                    "step " + std::to_string(i) + " references undeclared role '" +
                      step.role + "'");
      for (const auto &[argName, binding] : step.args)
      {
        if ((binding.kind == ArgBinding::Kind::FieldRead ||
             binding.kind == ArgBinding::Kind::RoleId) &&
            !roleNames.count(binding.role))
          throw Error(ErrorCode::DanglingRoleReference,
                      "argument '" + argName + "' of step " + std::to_string(i) +
                        " references undeclared role '" + binding.role + "'");
        if (binding.kind == ArgBinding::Kind::StepOutput && binding.stepIndex >= i)
          throw Error(ErrorCode::ParseError,
                      "argument '" + argName + "' of step " + std::to_string(i) +
                        " must reference an earlier step");
      }
    }

    recipe.definitionDigest = hexDigest(definitionBytes);
    return recipe;
  }

  nlohmann::json toJson(const Recipe &recipe)
  {
    nlohmann::json roles = nlohmann::json::array();
    for (const auto &role : recipe.roles)
    {
      nlohmann::json requires_ = nlohmann::json::array();
      for (const auto &id : role.requiredSubmodels)
        requires_.push_back(id.value);
      roles.push_back({{"name", role.name}, {"requires", std::move(requires_)}});
    }

    nlohmann::json steps = nlohmann::json::array();
    for (const auto &step : recipe.steps)
    {
      nlohmann::json args = nlohmann::json::object();
      for (const auto &[name, binding] : step.args)
        args[name] = bindingToJson(binding);
      steps.push_back(
        {{"role", step.role}, {"op", step.operationPath}, {"args", std::move(args)}});
    }

    return {{"name", recipe.name},
            {"cropType", recipe.cropType},
            {"roles", std::move(roles)},
            {"steps", std::move(steps)},
            {"definitionDigest", recipe.definitionDigest}};
  }

  Orchestrator::Orchestrator(Deps deps) : m_deps(std::move(deps))
  {
    if (!m_deps.lookupTwin || !m_deps.connect)
      throw Error(ErrorCode::BadConfig, "orchestrator requires lookup and connect");
    if (!m_deps.now)
      m_deps.now = [] {
        auto sinceEpoch = std::chrono::system_clock::now().time_since_epoch();
        return Timestamp::fromMillis(
          std::chrono::duration_cast<std::chrono::milliseconds>(sinceEpoch).count());
      };

    static std::atomic<int> instanceCounter{0};
    m_nonce = "orch-" + std::to_string(++instanceCounter);
  }

  void Orchestrator::registerRecipe(Recipe recipe)
  {
    std::lock_guard lock(m_recipesMutex);
    m_recipes[recipe.name] = std::move(recipe);
  }

  Recipe Orchestrator::recipe(const std::string &name) const
  {
    std::lock_guard lock(m_recipesMutex);
    auto it = m_recipes.find(name);
    if (it == m_recipes.end())
      throw Error(ErrorCode::NotFound, "no recipe '" + name + "'");
    return it->second;
  }

  std::vector<std::string> Orchestrator::recipeNames() const
  {
    std::lock_guard lock(m_recipesMutex);
    std::vector<std::string> out;
    for (const auto &[name, recipe] : m_recipes)
      out.push_back(name);
    return out;
  }

  void Orchestrator::setProcessDefaults(field::ProcessKind kind,
                                        const std::string &recipeName,
                                        std::map<std::string, TwinId> bindings,
                                        std::string fieldRole)
  {
    m_processDefaults[field::toString(kind)] =
      ProcessDefaults{recipeName, std::move(bindings), std::move(fieldRole)};
  }

  BoundRecipe Orchestrator::bindRoles(const Recipe &recipe,
                                      const std::map<std::string, TwinId> &bindings) const
  {
    for (const auto &role : recipe.roles)
    {
      auto it = bindings.find(role.name);
      if (it == bindings.end())
        throw Error(ErrorCode::UnboundRole, "role '" + role.name + "' is not bound");

      ShellDescriptor descriptor = m_deps.lookupTwin(it->second);
      std::set<std::string> offered;
      for (const auto &submodel : descriptor.submodels)
        offered.insert(submodel.semanticId.value);

      std::vector<std::string> missing;
      for (const auto &required : role.requiredSubmodels)
        if (!offered.count(required.value))
          missing.push_back(required.value);

      if (!missing.empty())
      {
        std::string list;
        for (const auto &id : missing)
          list += (list.empty() ? "" : ", ") + id;
        throw Error(ErrorCode::NonconformantTwin,
                    "twin '" + it->second.value + "' bound to role '" + role.name +
                      "' lacks required submodels: " + list);
      }
    }
    return BoundRecipe{recipe, bindings};
  }

  std::shared_ptr<std::mutex> Orchestrator::twinRunLock(const TwinId &id)
  {
    std::lock_guard lock(m_runLocksMutex);
    auto &slot = m_runLocks[id.value];
    if (!slot)
      slot = std::make_shared<std::mutex>();
    return slot;
  }

  field::JobRecord Orchestrator::run(const BoundRecipe &bound)
  {
    struct RoleAccess
    {
      std::shared_ptr<TwinAccess> twin;
      ShellDescriptor descriptor;
    };
    std::map<std::string, RoleAccess> accesses;
    for (const auto &[role, twinId] : bound.bindings)
    {
      ShellDescriptor descriptor = m_deps.lookupTwin(twinId);
      accesses[role] = RoleAccess{m_deps.connect(descriptor), descriptor};
    }

    // One run at a time per twin; ordered acquisition avoids lock cycles.
    std::set<std::string> twinIds;
    for (const auto &[role, twinId] : bound.bindings)
      twinIds.insert(twinId.value);
    std::vector<std::unique_lock<std::mutex>> held;
    std::vector<std::shared_ptr<std::mutex>> keepAlive;
    for (const auto &id : twinIds)
    {
      keepAlive.push_back(twinRunLock(TwinId(id)));
      held.emplace_back(*keepAlive.back());
    }

    std::vector<ArgMap> stepOutputs;
    std::optional<field::JobRecord> record;

    for (std::size_t i = 0; i < bound.recipe.steps.size(); ++i)
    {
      const Step &step = bound.recipe.steps[i];
      const std::string context = "step " + std::to_string(i) + " (" + step.role + "/" +
                                  step.operationPath + ")";
      RoleAccess &target = accesses.at(step.role);

      const std::vector<ParameterSpec> *inputs = nullptr;
      auto [submodelName, operationName] = splitPath(step.operationPath);
      for (const auto &submodel : target.descriptor.submodels)
        if (submodel.shortName == submodelName)
          for (const auto &element : submodel.elements)
            if (element.kind == ElementKind::Operation &&
                element.shortName == operationName)
              inputs = &element.inputs;
      if (!inputs)
        throw Error(ErrorCode::StepArgumentError,
                    context + ": bound twin offers no such operation");

      ArgMap args;
      for (const auto &[argName, binding] : step.args)
      {
        const ParameterSpec *spec = nullptr;
        for (const auto &candidate : *inputs)
          if (candidate.name == argName)
            spec = &candidate;
        if (!spec)
          throw Error(ErrorCode::StepArgumentError,
                      context + ": operation has no input '" + argName + "'");

        switch (binding.kind)
        {
          case ArgBinding::Kind::Literal:
            try
            {
              args[argName] = typedValueFromJson(binding.literal, spec->datatype);
            }
            catch (const Error &e)
            {
              throw Error(ErrorCode::StepArgumentError, context + ": " + e.detail());
            }
            break;

          case ArgBinding::Kind::StepOutput:
          {
            const ArgMap &outputs = stepOutputs.at(binding.stepIndex);
            auto it = outputs.find(binding.outputName);
            if (it == outputs.end())
              throw Error(ErrorCode::StepArgumentError,
                          context + ": step " + std::to_string(binding.stepIndex) +
                            " produced no output '" + binding.outputName + "'");
            args[argName] = it->second;
            break;
          }

          case ArgBinding::Kind::FieldRead:
          {
            RoleAccess &source = accesses.at(binding.role);
            std::optional<PropertyElement> element;
            for (const auto &path :
                 resolveBySemanticId(source.descriptor, binding.semanticId))
            {
              try
              {
                element = source.twin->readProperty(path);
                break;
              }
              catch (const Error &e)
              {
                if (e.code() != ErrorCode::PathNotFound)
                  throw Error(ErrorCode::DownstreamUnavailable,
                              context + ": " + e.detail());
              }
            }
            if (!element)
              throw Error(ErrorCode::StepArgumentError,
                          context + ": twin of role '" + binding.role +
                            "' has no property '" + binding.semanticId.value + "'");
            args[argName] = element->value;
            break;
          }

          case ArgBinding::Kind::RoleId:
            args[argName] = bound.bindings.at(binding.role).value;
            break;
        }
      }

      ArgMap outputs;
      try
      {
        outputs = target.twin->invokeOperation(step.operationPath, args);
      }
      catch (const Error &e)
      {
        if (e.code() == ErrorCode::TwinUnavailable ||
            e.code() == ErrorCode::DownstreamUnavailable)
          throw Error(ErrorCode::DownstreamUnavailable, context + ": " + e.detail());
        if (e.code() == ErrorCode::SignatureMismatch)
          throw Error(ErrorCode::StepArgumentError, context + ": " + e.detail());
        throw;
      }

      auto recordOutput = outputs.find("record");
      if (recordOutput != outputs.end())
        if (const auto *text = std::get_if<std::string>(&recordOutput->second))
          record = field::jobRecordFromJson(nlohmann::json::parse(*text));

      stepOutputs.push_back(std::move(outputs));
    }

    if (!record)
      throw Error(ErrorCode::InvalidArgument,
                  "recipe '" + bound.recipe.name + "' produced no job record");
    return *record;
  }

  field::JobRecord Orchestrator::handleTrigger(const field::ProcessTrigger &trigger)
  {
    // at-least-once delivery: serialize per trigger id, replay stored results
    std::shared_ptr<std::mutex> triggerLock;
    {
      std::lock_guard lock(m_triggersMutex);
      auto it = m_handledTriggers.find(trigger.triggerId);
      if (it != m_handledTriggers.end())
        return field::jobRecordFromJson(nlohmann::json::parse(it->second));
    }
    {
      std::lock_guard lock(m_runLocksMutex);
      auto &slot = m_runLocks["trigger:" + trigger.triggerId];
      if (!slot)
        slot = std::make_shared<std::mutex>();
      triggerLock = slot;
    }
    std::lock_guard triggerGuard(*triggerLock);
    {
      std::lock_guard lock(m_triggersMutex);
      auto it = m_handledTriggers.find(trigger.triggerId);
      if (it != m_handledTriggers.end())
        return field::jobRecordFromJson(nlohmann::json::parse(it->second));
    }

    auto defaults = m_processDefaults.find(field::toString(trigger.processKind));
    if (defaults == m_processDefaults.end())
      throw Error(ErrorCode::NoRecipeForProcess,
                  std::string("no recipe registered for process '") +
                    field::toString(trigger.processKind) + "'");

    Recipe processRecipe;
    try
    {
      processRecipe = recipe(defaults->second.recipeName);
    }
    catch (const Error &)
    {
      throw Error(ErrorCode::NoRecipeForProcess,
                  "recipe '" + defaults->second.recipeName + "' is not registered");
    }

    std::map<std::string, TwinId> bindings = defaults->second.bindings;
    bindings[defaults->second.fieldRole] = trigger.fieldId;
    BoundRecipe bound = bindRoles(processRecipe, bindings);

    ShellDescriptor fieldDescriptor = m_deps.lookupTwin(trigger.fieldId);
    std::shared_ptr<TwinAccess> fieldTwin = m_deps.connect(fieldDescriptor);
    auto readCurrent = [&]() -> double {
      for (const auto &path :
           resolveBySemanticId(fieldDescriptor, trigger.targetSemanticId))
      {
        try
        {
          return std::get<double>(fieldTwin->readProperty(path).value);
        }
        catch (const Error &e)
        {
          if (e.code() != ErrorCode::PathNotFound)
            throw;
        }
      }
      throw Error(ErrorCode::UnsupportedTargetConcept,
                  "field twin has no property '" + trigger.targetSemanticId.value + "'");
    };

    for (int pass = 0; pass < m_deps.maxPasses; ++pass)
    {
      field::JobRecord record = run(bound);
      if (readCurrent() >= trigger.targetValue)
      {
        std::lock_guard lock(m_triggersMutex);
        m_handledTriggers.emplace(trigger.triggerId, field::toJson(record).dump());
        return record;
      }
    }
    throw Error(ErrorCode::TargetUnreachable,
                "target " + std::to_string(trigger.targetValue) + " not reached within " +
                  std::to_string(m_deps.maxPasses) + " passes");
  }

  void mountOrchestrator(httplib::Server &server,
                         std::shared_ptr<Orchestrator> orchestrator)
  {
    struct Runs
    {
      std::mutex mutex;
      std::map<std::string, nlohmann::json> byId;
      int next = 0;
    };
    auto runs = std::make_shared<Runs>();

    server.Post("/recipes", jsonRoute([orchestrator](const httplib::Request &req) {
                  Recipe recipe = loadRecipe(req.body);
                  orchestrator->registerRecipe(recipe);
                  return nlohmann::json{{"name", recipe.name},
                                        {"digest", recipe.definitionDigest}};
                }));

    server.Get(R"(/recipes/([^/]+))",
               jsonRoute([orchestrator](const httplib::Request &req) {
                 return toJson(orchestrator->recipe(req.matches[1]));
               }));

    server.Post("/runs", jsonRoute([orchestrator, runs](const httplib::Request &req) {
                  nlohmann::json body = nlohmann::json::parse(req.body);
                  std::map<std::string, TwinId> bindings;
                  for (const auto &[role, twinId] : body.at("bindings").items())
                    bindings[role] = TwinId(twinId.get<std::string>());

                  Recipe recipe =
                    orchestrator->recipe(body.at("recipe").get<std::string>());
                  field::JobRecord record =
                    orchestrator->run(orchestrator->bindRoles(recipe, bindings));

                  std::lock_guard lock(runs->mutex);
                  std::string runId = "run-" + std::to_string(++runs->next);
                  nlohmann::json result = {{"runId", runId},
                                           {"record", field::toJson(record)}};
                  runs->byId[runId] = result;
                  return result;
                }));

    server.Get(R"(/runs/([^/]+))", jsonRoute([runs](const httplib::Request &req) {
                 std::lock_guard lock(runs->mutex);
                 auto it = runs->byId.find(req.matches[1]);
                 if (it == runs->byId.end())
                   throw Error(ErrorCode::NotFound, "no such run");
                 return it->second;
               }));

    server.Post("/triggers", jsonRoute([orchestrator](const httplib::Request &req) {
                  field::ProcessTrigger trigger =
                    field::processTriggerFromJson(nlohmann::json::parse(req.body));
                  field::JobRecord record = orchestrator->handleTrigger(trigger);
                  return nlohmann::json{{"record", field::toJson(record)}};
                }));
  }

  Orchestrator::Deps hubBackedDeps(const std::string &hubUrl,
                                   std::function<Timestamp()> now,
                                   std::chrono::milliseconds timeout, int maxPasses)
  {
    Orchestrator::Deps deps;
    deps.lookupTwin = [hubUrl, timeout](const TwinId &id) {
      return hub::HubClient(hubUrl, timeout).lookup(id);
    };
    deps.connect = [timeout](const ShellDescriptor &descriptor) {
      if (descriptor.endpoint.empty())
        throw Error(ErrorCode::TwinUnavailable,
                    "twin '" + descriptor.id.value + "' has no endpoint");
      return std::make_shared<HttpTwin>(descriptor.endpoint, timeout);
    };
    deps.now = std::move(now);
    deps.maxPasses = maxPasses;
    return deps;
  }

  OrchestratorClient::OrchestratorClient(std::string url,
                                         std::chrono::milliseconds timeout)
    : m_url(std::move(url)), m_timeout(timeout)
  {
  }

  nlohmann::json OrchestratorClient::request(const std::string &path,
                                             const nlohmann::json &body) const
  {
    httplib::Client client(m_url);
    client.set_connection_timeout(m_timeout);
    client.set_read_timeout(m_timeout);

    httplib::Result result = client.Post(path, body.dump(), "application/json");
    if (!result)
      throw Error(ErrorCode::TwinUnavailable,
                  "no response from orchestrator at " + m_url);

    nlohmann::json parsed;
    if (!result->body.empty())
      parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (result->status >= 400)
    {
      if (parsed.is_object() && parsed.contains("error"))
        throw Error(errorCodeFromString(parsed["error"].value("code", "")),
                    parsed["error"].value("message", ""));
      throw Error(ErrorCode::TwinUnavailable,
                  "HTTP " + std::to_string(result->status) + " from orchestrator");
    }
    if (parsed.is_discarded())
      throw Error(ErrorCode::ParseError, "invalid JSON from orchestrator");
    return parsed;
  }

  std::string OrchestratorClient::registerRecipe(const std::string &definitionBytes) const
  {
    httplib::Client client(m_url);
    client.set_connection_timeout(m_timeout);
    client.set_read_timeout(m_timeout);
    httplib::Result result = client.Post("/recipes", definitionBytes, "application/json");
    if (!result)
      throw Error(ErrorCode::TwinUnavailable,
                  "no response from orchestrator at " + m_url);
    nlohmann::json parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (result->status >= 400)
    {
      if (parsed.is_object() && parsed.contains("error"))
        throw Error(errorCodeFromString(parsed["error"].value("code", "")),
                    parsed["error"].value("message", ""));
      throw Error(ErrorCode::ParseError, "recipe registration failed");
    }
    return parsed.at("digest").get<std::string>();
  }

  field::JobRecord OrchestratorClient::run(
    const std::string &recipeName, const std::map<std::string, TwinId> &bindings) const
  {
    nlohmann::json bindingsJson = nlohmann::json::object();
    for (const auto &[role, twinId] : bindings)
      bindingsJson[role] = twinId.value;
    nlohmann::json response =
      request("/runs", {{"recipe", recipeName}, {"bindings", bindingsJson}});
    return field::jobRecordFromJson(response.at("record"));
  }

  field::JobRecord OrchestratorClient::deliverTrigger(
    const field::ProcessTrigger &trigger) const
  {
    nlohmann::json response = request("/triggers", field::toJson(trigger));
    return field::jobRecordFromJson(response.at("record"));
  }
}  // namespace agritwin::orch
