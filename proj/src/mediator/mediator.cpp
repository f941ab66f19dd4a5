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

#include "agritwin/mediator/mediator.hpp"

#include <algorithm>
#include <set>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/http_twin.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/hub/twin_hub.hpp"

namespace agritwin::mediator
{
  const char *toString(Verb verb)
  {
    (void)verb;
    return "CopyOneTime";
  }

  Verb verbFromString(const std::string &name)
  {
    if (name == "CopyOneTime")
      return Verb::CopyOneTime;
    throw Error(ErrorCode::ParseError, "unknown exchange verb '" + name + "'");
  }

  const char *toString(GrantScope scope)
  {
    return scope == GrantScope::OneTime ? "OneTime" : "Standing";
  }

  GrantScope grantScopeFromString(const std::string &name)
  {
    if (name == "OneTime")
      return GrantScope::OneTime;
    if (name == "Standing")
      return GrantScope::Standing;
    throw Error(ErrorCode::ParseError, "unknown grant scope '" + name + "'");
  }

  const char *toString(ReceiptStatus status)
  {
    return status == ReceiptStatus::Delivered ? "Delivered" : "Failed";
  }

  nlohmann::json toJson(const ExchangeCommand &command)
  {
    nlohmann::json items = nlohmann::json::array();
    for (const auto &item : command.items)
      items.push_back(item.value);
    return {{"commandId", command.commandId},
            {"verb", toString(command.verb)},
            {"sourceTwin", command.sourceTwin.value},
            {"destinationTwin", command.destinationTwin.value},
            {"items", std::move(items)},
            {"requestedBy", command.requestedBy}};
  }

  ExchangeCommand exchangeCommandFromJson(const nlohmann::json &value)
  {
    ExchangeCommand command;
    command.commandId = value.at("commandId").get<std::string>();
    command.verb = verbFromString(value.value("verb", "CopyOneTime"));
    command.sourceTwin = TwinId(value.at("sourceTwin").get<std::string>());
    command.destinationTwin = TwinId(value.at("destinationTwin").get<std::string>());
    for (const auto &item : value.at("items"))
      command.items.emplace_back(item.get<std::string>());
    command.requestedBy = value.at("requestedBy").get<std::string>();
    return command;
  }

  nlohmann::json toJson(const Grant &grant)
  {
    nlohmann::json items = nlohmann::json::array();
    for (const auto &item : grant.items)
      items.push_back(item.value);
    return {{"grantId", grant.grantId},
            {"grantor", grant.grantor},
            {"subject", grant.subject},
            {"twin", grant.twin.value},
            {"items", std::move(items)},
            {"scope", toString(grant.scope)},
            {"consumed", grant.consumed}};
  }

  Grant grantFromJson(const nlohmann::json &value)
  {
    Grant grant;
    grant.grantId = value.value("grantId", std::string());
    grant.grantor = value.at("grantor").get<std::string>();
    grant.subject = value.at("subject").get<std::string>();
    grant.twin = TwinId(value.at("twin").get<std::string>());
    for (const auto &item : value.at("items"))
      grant.items.emplace_back(item.get<std::string>());
    grant.scope = grantScopeFromString(value.value("scope", "OneTime"));
    grant.consumed = value.value("consumed", false);
    return grant;
  }

  nlohmann::json toJson(const ExchangeReceipt &receipt)
  {
    nlohmann::json perItem = nlohmann::json::array();
    for (const auto &item : receipt.perItem)
    {
      nlohmann::json entry = {{"item", item.item.value}, {"delivered", item.delivered}};
      if (item.delivered)
        entry["value"] = item.value;
      else
      {
        entry["failureCode"] = item.failureCode;
        entry["failureMessage"] = item.failureMessage;
      }
      perItem.push_back(std::move(entry));
    }
    return {{"commandId", receipt.commandId},
            {"status", toString(receipt.status)},
            {"perItem", std::move(perItem)},
            {"executedAt", receipt.executedAt.toIso8601()}};
  }

  ExchangeReceipt exchangeReceiptFromJson(const nlohmann::json &value)
  {
    ExchangeReceipt receipt;
    receipt.commandId = value.at("commandId").get<std::string>();
    receipt.status = value.at("status") == "Delivered" ? ReceiptStatus::Delivered
                                                       : ReceiptStatus::Failed;
    receipt.executedAt = Timestamp::parse(value.at("executedAt").get<std::string>());
    for (const auto &entry : value.at("perItem"))
    {
      ItemOutcome outcome;
      outcome.item = SemanticId(entry.at("item").get<std::string>());
      outcome.delivered = entry.at("delivered").get<bool>();
      if (outcome.delivered)
        outcome.value = entry.value("value", nlohmann::json());
      else
      {
        outcome.failureCode = entry.value("failureCode", std::string());
        outcome.failureMessage = entry.value("failureMessage", std::string());
      }
      receipt.perItem.push_back(std::move(outcome));
    }
    return receipt;
  }

  std::string GrantStore::add(Grant grant)
  {
    std::lock_guard lock(m_mutex);
    if (grant.grantId.empty())
      grant.grantId = "grant-" + std::to_string(++m_nextId);
    std::string id = grant.grantId;
    m_grants[id] = Slot{std::move(grant), false};
    return id;
  }

  std::optional<std::string> GrantStore::reserve(const std::string &subject,
                                                 const TwinId &twin,
                                                 const std::vector<SemanticId> &items)
  {
    std::lock_guard lock(m_mutex);
    for (auto &[id, slot] : m_grants)
    {
      if (slot.busy || slot.grant.consumed)
        continue;
      if (slot.grant.subject != subject || !(slot.grant.twin == twin))
        continue;

      bool covers = std::all_of(items.begin(), items.end(), [&](const SemanticId &item) {
        return std::find(slot.grant.items.begin(), slot.grant.items.end(), item) !=
               slot.grant.items.end();
      });
      if (!covers)
        continue;

      slot.busy = true;
      return id;
    }
    return std::nullopt;
  }

  void GrantStore::commit(const std::string &grantId)
  {
    std::lock_guard lock(m_mutex);
    auto it = m_grants.find(grantId);
    if (it == m_grants.end())
      return;
    it->second.busy = false;
    if (it->second.grant.scope == GrantScope::OneTime)
      it->second.grant.consumed = true;
  }

  void GrantStore::release(const std::string &grantId)
  {
    std::lock_guard lock(m_mutex);
    auto it = m_grants.find(grantId);
    if (it != m_grants.end())
      it->second.busy = false;
  }

  std::optional<Grant> GrantStore::get(const std::string &grantId) const
  {
    std::lock_guard lock(m_mutex);
    auto it = m_grants.find(grantId);
    if (it == m_grants.end())
      return std::nullopt;
    return it->second.grant;
  }

  Mediator::Mediator(Deps deps) : m_deps(std::move(deps))
  {
    if (!m_deps.lookupTwin || !m_deps.connect || !m_deps.vocabulary)
      throw Error(ErrorCode::BadConfig, "mediator requires lookup, connect and vocabulary");
    if (!m_deps.now)
      m_deps.now = [] {
        auto sinceEpoch = std::chrono::system_clock::now().time_since_epoch();
        return Timestamp::fromMillis(
          std::chrono::duration_cast<std::chrono::milliseconds>(sinceEpoch).count());
      };
  }

  std::string Mediator::registerGrant(Grant grant)
  {
    for (const SemanticId &item : grant.items)
      if (!m_deps.vocabulary->contains(item))
        throw Error(ErrorCode::UnresolvableSemanticId,
                    "grant item '" + item.value + "' does not resolve in the vocabulary");
    if (grant.items.empty())
      throw Error(ErrorCode::InvalidArgument, "grant covers no items");
    return m_grants.add(std::move(grant));
  }

  std::shared_ptr<std::mutex> Mediator::destinationLock(const TwinId &id)
  {
    std::lock_guard lock(m_destLocksMutex);
    auto &slot = m_destLocks[id.value];
    if (!slot)
      slot = std::make_shared<std::mutex>();
    return slot;
  }

  ExchangeReceipt Mediator::submitExchange(const ExchangeCommand &command)
  {
    if (command.commandId.empty())
      throw Error(ErrorCode::InvalidArgument, "command lacks a commandId");
    if (command.items.empty())
      throw Error(ErrorCode::InvalidArgument, "command requests no items");
    if (command.sourceTwin == command.destinationTwin)
      throw Error(ErrorCode::InvalidArgument,
                  "source and destination twin must differ");

    {
      std::lock_guard lock(m_receiptsMutex);
      auto it = m_receipts.find(command.commandId);
      if (it != m_receipts.end())
        return exchangeReceiptFromJson(nlohmann::json::parse(it->second));
    }

    auto destLock = destinationLock(command.destinationTwin);
    std::lock_guard destGuard(*destLock);

    {
      std::lock_guard lock(m_receiptsMutex);
      auto it = m_receipts.find(command.commandId);
      if (it != m_receipts.end())
        return exchangeReceiptFromJson(nlohmann::json::parse(it->second));
    }

    ExchangeReceipt receipt = execute(command);

    {
      std::lock_guard lock(m_receiptsMutex);
      m_receipts.emplace(command.commandId, toJson(receipt).dump());
    }
    return receipt;
  }

  ExchangeReceipt Mediator::execute(const ExchangeCommand &command)
  {
    ShellDescriptor source = m_deps.lookupTwin(command.sourceTwin);
    ShellDescriptor destination = m_deps.lookupTwin(command.destinationTwin);

    auto grantId =
      m_grants.reserve(command.requestedBy, command.sourceTwin, command.items);
    if (!grantId)
      throw Error(ErrorCode::AccessNotGranted,
                  "no unconsumed grant lets '" + command.requestedBy +
                    "' read the requested items from '" + command.sourceTwin.value +
                    "'");

    ExchangeReceipt receipt;
    receipt.commandId = command.commandId;
    receipt.executedAt = m_deps.now();

    try
    {
      std::shared_ptr<TwinAccess> sourceTwin = m_deps.connect(source);
      std::shared_ptr<TwinAccess> destinationTwin = m_deps.connect(destination);
      ShellDescriptor sourceShape = sourceTwin->describe();

      bool allDelivered = true;
      for (const SemanticId &item : command.items)
      {
        ItemOutcome outcome;
        outcome.item = item;

        std::optional<PropertyElement> element;
        for (const std::string &path : resolveBySemanticId(sourceShape, item))
        {
          try
          {
            element = sourceTwin->readProperty(path);
            break;
          }
          catch (const Error &e)
          {
            if (e.code() != ErrorCode::PathNotFound)
              throw;  // the twin vanished mid-exchange
          }
        }

        if (!element)
        {
          outcome.failureCode = toString(ErrorCode::ItemNotFoundOnSource);
          outcome.failureMessage =
            "'" + item.value + "' not present on '" + command.sourceTwin.value + "'";
          allDelivered = false;
          receipt.perItem.push_back(std::move(outcome));
          continue;
        }

        vocab::Violation violation =
          m_deps.vocabulary->validateValue(item, element->value, element->unit);
        if (violation != vocab::Violation::Ok)
        {
          outcome.failureCode = vocab::toString(violation);
          outcome.failureMessage =
            "source value for '" + item.value + "' fails vocabulary validation";
          allDelivered = false;
          receipt.perItem.push_back(std::move(outcome));
          continue;
        }

        destinationTwin->deliverToInbox(item, element->datatype, element->unit,
                                        element->value, receipt.executedAt);
        outcome.delivered = true;
        outcome.value = toJson(element->value);
        receipt.perItem.push_back(std::move(outcome));
      }

      receipt.status = allDelivered ? ReceiptStatus::Delivered : ReceiptStatus::Failed;
    }
    catch (...)
    {
      m_grants.release(*grantId);
      throw;
    }

    if (receipt.status == ReceiptStatus::Delivered)
      m_grants.commit(*grantId);
    else
      m_grants.release(*grantId);
    return receipt;
  }

  std::string Mediator::receiptBytes(const std::string &commandId) const
  {
    std::lock_guard lock(m_receiptsMutex);
    auto it = m_receipts.find(commandId);
    if (it == m_receipts.end())
      throw Error(ErrorCode::NotFound, "no receipt for command '" + commandId + "'");
    return it->second;
  }

  ExchangeReceipt Mediator::receipt(const std::string &commandId) const
  {
    return exchangeReceiptFromJson(nlohmann::json::parse(receiptBytes(commandId)));
  }

  std::vector<std::pair<SemanticId, std::string>> Mediator::introspectSource(
    const TwinId &id)
  {
    ShellDescriptor descriptor = m_deps.lookupTwin(id);
    std::shared_ptr<TwinAccess> twin = m_deps.connect(descriptor);
    ShellDescriptor shape = twin->describe();

    std::vector<std::pair<SemanticId, std::string>> catalog;
    for (const auto &submodel : shape.submodels)
      for (const auto &element : submodel.elements)
        catalog.emplace_back(element.semanticId,
                             joinPath(submodel.shortName, element.shortName));
    return catalog;
  }

  void mountMediator(httplib::Server &server, std::shared_ptr<Mediator> mediator)
  {
    server.Post("/exchange", [mediator](const httplib::Request &req,
                                        httplib::Response &res) {
      try
      {
        ExchangeCommand command =
          exchangeCommandFromJson(nlohmann::json::parse(req.body));
        mediator->submitExchange(command);
        // replaying must yield byte-identical receipts; serve the stored bytes
        res.status = 200;
        res.set_content(mediator->receiptBytes(command.commandId), "application/json");
      }
      catch (const Error &error)
      {
        sendError(res, error);
      }
      catch (const nlohmann::json::exception &e)
      {
        sendError(res, Error(ErrorCode::ParseError, e.what()));
      }
    });

    server.Get(R"(/exchange/(.+))", [mediator](const httplib::Request &req,
                                               httplib::Response &res) {
      try
      {
        std::string id = httplib::detail::decode_url(req.matches[1], false);
        res.status = 200;
        res.set_content(mediator->receiptBytes(id), "application/json");
      }
      catch (const Error &error)
      {
        sendError(res, error);
      }
    });

    server.Post("/grants", jsonRoute([mediator](const httplib::Request &req) {
                  Grant grant = grantFromJson(nlohmann::json::parse(req.body));
                  return nlohmann::json{{"grantId", mediator->registerGrant(grant)}};
                }));

    server.Get(R"(/introspect/(.+))",
               jsonRoute([mediator](const httplib::Request &req) {
                 std::string id = httplib::detail::decode_url(req.matches[1], false);
                 nlohmann::json out = nlohmann::json::array();
                 for (const auto &[semanticId, path] :
                      mediator->introspectSource(TwinId(id)))
                   out.push_back({{"semanticId", semanticId.value}, {"path", path}});
                 return out;
               }));
  }

  Mediator::Deps hubBackedDeps(const std::string &hubUrl,
                               std::shared_ptr<const vocab::Vocabulary> vocabulary,
                               std::function<Timestamp()> now,
                               std::chrono::milliseconds timeout)
  {
    Mediator::Deps deps;
    deps.lookupTwin = [hubUrl, timeout](const TwinId &id) {
      return hub::HubClient(hubUrl, timeout).lookup(id);
    };
    deps.connect = [timeout](const ShellDescriptor &descriptor) {
      if (descriptor.endpoint.empty())
        throw Error(ErrorCode::TwinUnavailable,
                    "twin '" + descriptor.id.value + "' has no endpoint");
      return std::make_shared<HttpTwin>(descriptor.endpoint, timeout);
    };
    deps.vocabulary = std::move(vocabulary);
    deps.now = std::move(now);
    return deps;
  }

  MediatorClient::MediatorClient(std::string url, std::chrono::milliseconds timeout)
    : m_url(std::move(url)), m_timeout(timeout)
  {
  }

  nlohmann::json MediatorClient::request(const std::string &method,
                                         const std::string &path,
                                         const nlohmann::json *body,
                                         std::string *rawBody) const
  {
    httplib::Client client(m_url);
    client.set_connection_timeout(m_timeout);
    client.set_read_timeout(m_timeout);

    httplib::Result result = method == "GET"
                               ? client.Get(path)
                               : client.Post(path, body ? body->dump() : "{}",
                                             "application/json");
    if (!result)
      throw Error(ErrorCode::TwinUnavailable, "no response from mediator at " + m_url);

    nlohmann::json parsed;
    if (!result->body.empty())
      parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (result->status >= 400)
    {
      if (parsed.is_object() && parsed.contains("error"))
        throw Error(errorCodeFromString(parsed["error"].value("code", "")),
                    parsed["error"].value("message", ""));
      throw Error(ErrorCode::TwinUnavailable,
                  "HTTP " + std::to_string(result->status) + " from mediator");
    }
    if (parsed.is_discarded())
      throw Error(ErrorCode::ParseError, "invalid JSON from mediator");
    if (rawBody)
      *rawBody = result->body;
    return parsed;
  }

  std::string MediatorClient::registerGrant(const Grant &grant) const
  {
    nlohmann::json body = toJson(grant);
    return request("POST", "/grants", &body, nullptr).at("grantId").get<std::string>();
  }

  ExchangeReceipt MediatorClient::submitExchange(const ExchangeCommand &command) const
  {
    nlohmann::json body = toJson(command);
    return exchangeReceiptFromJson(request("POST", "/exchange", &body, nullptr));
  }

  std::string MediatorClient::submitExchangeBytes(const ExchangeCommand &command) const
  {
    nlohmann::json body = toJson(command);
    std::string raw;
    request("POST", "/exchange", &body, &raw);
    return raw;
  }

  std::string MediatorClient::receiptBytes(const std::string &commandId) const
  {
    std::string raw;
    request("GET", "/exchange/" + commandId, nullptr, &raw);
    return raw;
  }
}  // namespace agritwin::mediator
