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
#include "agritwin/vocab/vocabulary.hpp"

namespace agritwin::mediator
{
  enum class Verb
  {
    CopyOneTime
  };

  enum class GrantScope
  {
    OneTime,
    Standing
  };

  enum class ReceiptStatus
  {
    Delivered,
    Failed
  };

  const char *toString(Verb verb);
  const char *toString(GrantScope scope);
  const char *toString(ReceiptStatus status);
  Verb verbFromString(const std::string &name);
  GrantScope grantScopeFromString(const std::string &name);

  /// A generic semantic data-exchange request: "get X,Y from twin A, send
  /// them to twin B".
  struct ExchangeCommand
  {
    std::string commandId;
    Verb verb = Verb::CopyOneTime;
    TwinId sourceTwin;
    TwinId destinationTwin;
    std::vector<SemanticId> items;
    std::string requestedBy;  // principal id
  };

  struct Grant
  {
    std::string grantId;  // assigned by the mediator
    std::string grantor;  // the farmer
    std::string subject;  // the service allowed to exchange
    TwinId twin;          // data source being shared
    std::vector<SemanticId> items;
    GrantScope scope = GrantScope::OneTime;
    bool consumed = false;
  };

  struct ItemOutcome
  {
    SemanticId item;
    bool delivered = false;
    nlohmann::json value;     // delivered value, when delivered
    std::string failureCode;  // per-item failure, when not
    std::string failureMessage;
  };

  struct ExchangeReceipt
  {
    std::string commandId;
    ReceiptStatus status = ReceiptStatus::Failed;
    std::vector<ItemOutcome> perItem;
    Timestamp executedAt;
  };

  nlohmann::json toJson(const ExchangeCommand &command);
  ExchangeCommand exchangeCommandFromJson(const nlohmann::json &value);
  nlohmann::json toJson(const Grant &grant);
  Grant grantFromJson(const nlohmann::json &value);
  nlohmann::json toJson(const ExchangeReceipt &receipt);
  ExchangeReceipt exchangeReceiptFromJson(const nlohmann::json &value);

  /// Grant bookkeeping with atomic reservation so one-time grants cannot be
  /// double-spent under concurrent commands.
  class GrantStore
  {
  public:
    std::string add(Grant grant);

    /// Atomically reserves an unconsumed grant covering the request, or
    /// nullopt. A reserved grant is invisible until committed or released.
    std::optional<std::string> reserve(const std::string &subject, const TwinId &twin,
                                       const std::vector<SemanticId> &items);

    /// Consumes one-time grants; standing grants stay active.
    void commit(const std::string &grantId);
    void release(const std::string &grantId);

    std::optional<Grant> get(const std::string &grantId) const;

  private:
    struct Slot
    {
      Grant grant;
      bool busy = false;
    };

    mutable std::mutex m_mutex;
    std::map<std::string, Slot> m_grants;
    int m_nextId = 0;
  };

  /// DD.3: the self-contained exchange service. It reaches twins exclusively
  /// through the registry descriptor and the reflective twin interface; no
  /// twin-specific code or configuration exists here.
  class Mediator
  {
  public:
    struct Deps
    {
      std::function<ShellDescriptor(const TwinId &)> lookupTwin;
      std::function<std::shared_ptr<TwinAccess>(const ShellDescriptor &)> connect;
      std::shared_ptr<const vocab::Vocabulary> vocabulary;
      std::function<Timestamp()> now;
    };

    explicit Mediator(Deps deps);

    /// Throws Error{UnresolvableSemanticId}.
    std::string registerGrant(Grant grant);

    /// Executes the command, or replays the stored receipt for a known
    /// commandId. Throws Error{AccessNotGranted | TwinUnavailable | NotFound}.
    ExchangeReceipt submitExchange(const ExchangeCommand &command);

    /// The exact receipt bytes stored at execution time.
    std::string receiptBytes(const std::string &commandId) const;
    ExchangeReceipt receipt(const std::string &commandId) const;

    /// Full semantic catalog of a twin, purely via reflection.
    std::vector<std::pair<SemanticId, std::string>> introspectSource(const TwinId &id);

    GrantStore &grants() { return m_grants; }

  private:
    ExchangeReceipt execute(const ExchangeCommand &command);
    std::shared_ptr<std::mutex> destinationLock(const TwinId &id);

    Deps m_deps;
    GrantStore m_grants;

    mutable std::mutex m_receiptsMutex;
    std::map<std::string, std::string> m_receipts;  // commandId -> receipt bytes

    std::mutex m_destLocksMutex;
    std::map<std::string, std::shared_ptr<std::mutex>> m_destLocks;
  };

  /// HTTP surface:
  ///   POST /exchange            ExchangeCommand -> receipt
  ///   GET  /exchange/{commandId}
  ///   POST /grants              Grant -> {grantId}
  ///   GET  /introspect/{twinId} -> [{semanticId, path}]
  void mountMediator(httplib::Server &server, std::shared_ptr<Mediator> mediator);

  /// Standard wiring against a hub: registry lookups over HTTP, twins reached
  /// at their descriptor endpoints with the given call timeout.
  Mediator::Deps hubBackedDeps(const std::string &hubUrl,
                               std::shared_ptr<const vocab::Vocabulary> vocabulary,
                               std::function<Timestamp()> now,
                               std::chrono::milliseconds timeout = std::chrono::seconds(5));

  class MediatorClient
  {
  public:
    explicit MediatorClient(std::string url,
                            std::chrono::milliseconds timeout = std::chrono::seconds(30));

    std::string registerGrant(const Grant &grant) const;
    ExchangeReceipt submitExchange(const ExchangeCommand &command) const;
    std::string submitExchangeBytes(const ExchangeCommand &command) const;
    std::string receiptBytes(const std::string &commandId) const;

  private:
    nlohmann::json request(const std::string &method, const std::string &path,
                           const nlohmann::json *body, std::string *rawBody) const;

    std::string m_url;
    std::chrono::milliseconds m_timeout;
  };
}  // namespace agritwin::mediator
