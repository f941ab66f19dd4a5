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
#include <set>
#include <string>
#include <vector>

#include "agritwin/core/http_service.hpp"
#include "agritwin/core/http_twin.hpp"
#include "agritwin/hub/persistence.hpp"
#include "agritwin/hub/registry.hpp"

namespace agritwin::hub
{
  /// The vendor-neutral platform: twin registry, hosted digital field twins,
  /// and the shared vocabulary surface, one HTTP process.
  ///
  ///   POST   /registry/twins        {descriptor, tags}
  ///   DELETE /registry/twins/{id}
  ///   GET    /registry/twins/{id}
  ///   POST   /registry/query        TwinQuery JSON -> ["id", ...]
  ///   GET    /concepts/{semanticId} , POST /concepts
  ///   ...    /twins/{id}/...        hosted twin endpoints
  class TwinHub
  {
  public:
    struct Config
    {
      std::string host = "127.0.0.1";
      int port = 7700;
      std::string dataDir;  // env AGRITWIN_DATA_DIR; created when missing
      std::shared_ptr<vocab::Vocabulary> vocabulary;
      std::function<Timestamp()> now;  // defaults to wall clock
      // Properties denormalized into registry tags on write-through.
      std::vector<std::string> tagConcepts = {"urn:agrivoc:crop.type",
                                              "urn:agrivoc:soil.nitrogen",
                                              "urn:agrivoc:plant.healthIndex"};
    };

    explicit TwinHub(Config config);
    ~TwinHub();

    /// Binds the HTTP surface and re-hosts every twin persisted in dataDir.
    void start();
    void stop();

    std::string baseUrl() const { return m_http.baseUrl(); }
    Registry &registry() { return m_registry; }
    const Registry &registry() const { return m_registry; }
    std::shared_ptr<vocab::Vocabulary> vocabulary() const { return m_vocabulary; }
    Timestamp now() const { return m_now(); }

    /// Hosts a digital field twin and auto-registers it. Returns the endpoint.
    /// Throws Error{InvalidArgument | DuplicateTwinId}.
    std::string hostFieldTwin(TwinShell model);

    /// The hosted twin, for in-process wiring. Throws Error{TwinUnavailable}
    /// when the twin is not hosted here or is suspended.
    std::shared_ptr<LocalTwin> hostedTwin(const TwinId &id) const;

    std::vector<TwinId> hostedTwinIds() const;
    std::string endpointFor(const TwinId &id) const;

    /// Simulates outage of one hosted twin: its endpoints answer
    /// TwinUnavailable while the registry entry stays visible.
    void suspendTwin(const TwinId &id);
    void resumeTwin(const TwinId &id);
    bool isSuspended(const TwinId &id) const;

  private:
    std::string hostInternal(TwinShell model, bool fresh);
    void attachObservers(const std::shared_ptr<LocalTwin> &twin,
                         const std::shared_ptr<TwinLog> &log);
    void seedFacets(const std::shared_ptr<LocalTwin> &twin);
    void mountRoutes();
    void restorePersisted();

    Config m_config;
    std::shared_ptr<vocab::Vocabulary> m_vocabulary;
    std::function<Timestamp()> m_now;
    Registry m_registry;
    HttpService m_http;

    mutable std::mutex m_twinsMutex;
    std::map<std::string, std::shared_ptr<LocalTwin>> m_twins;
    std::map<std::string, std::shared_ptr<TwinLog>> m_logs;
    std::set<std::string> m_suspended;
  };

  /// Client for the registry + vocabulary surface of a hub.
  class HubClient
  {
  public:
    explicit HubClient(std::string hubUrl,
                       std::chrono::milliseconds timeout = std::chrono::seconds(5));

    void registerTwin(const ShellDescriptor &descriptor,
                      const std::map<std::string, TagValue> &tags) const;
    void deregisterTwin(const TwinId &id) const;
    ShellDescriptor lookup(const TwinId &id) const;
    std::vector<TwinId> query(const TwinQuery &query) const;
    vocab::ConceptDescription lookupConcept(const SemanticId &id) const;

    const std::string &url() const { return m_url; }

  private:
    nlohmann::json request(const std::string &method, const std::string &path,
                           const nlohmann::json *body) const;

    std::string m_url;
    std::chrono::milliseconds m_timeout;
  };
}  // namespace agritwin::hub
