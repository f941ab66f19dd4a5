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
#include <string>
#include <vector>

#include "agritwin/core/http_service.hpp"
#include "agritwin/core/twin_access.hpp"
#include "agritwin/vocab/vocabulary.hpp"

namespace agritwin::sim
{
  /// S_1: the market-established fertilization recommendation service. It
  /// discovers field-data twins through the hub query interface and obtains
  /// their data through the mediator, so a brand-new FMIS needs no code or
  /// configuration change here.
  class RecommendationService
  {
  public:
    struct Config
    {
      std::string hubUrl;
      std::string mediatorUrl;
      std::string twinId = "urn:agritwin:sys:frs-1";
      std::string principal = "frs-1";
      std::vector<std::string> items = {"urn:agrivoc:field.boundaries",
                                        "urn:agrivoc:crop.type",
                                        "urn:agrivoc:soil.nitrogen"};
      std::map<std::string, double> nitrogenTargetsKgHa = {{"potato", 60.0},
                                                           {"sugar beet", 80.0}};
      std::string host = "127.0.0.1";
      int twinPort = 0;
    };

    RecommendationService(Config config, std::shared_ptr<vocab::Vocabulary> vocabulary,
                          std::function<Timestamp()> now);

    /// Serves the service's own twin and registers it with the hub.
    void start();
    void stop();

    struct Outcome
    {
      std::string commandId;
      std::string sourceTwin;
      std::string receiptStatus;
      double currentNitrogenKgHa = 0.0;
      double fieldAreaHa = 0.0;
      double recommendationKgHa = 0.0;
    };

    /// One-time field data access for one recommendation.
    /// Throws Error{NotFound} when no twin advertises the crop, and
    /// Error{AccessNotGranted} when the farmer has not granted access.
    Outcome recommend(const std::string &cropType);

    /// Deployment identity: these digests changing would mean a design-time
    /// modification of S_1.
    std::string configDigest() const;
    std::string codeDigest() const;

    const Config &config() const { return m_config; }
    TwinId twinId() const { return TwinId(m_config.twinId); }
    std::shared_ptr<LocalTwin> twin() { return m_twin; }
    const std::string &lastCommandId() const { return m_lastCommandId; }

  private:
    Config m_config;
    std::shared_ptr<vocab::Vocabulary> m_vocabulary;
    std::function<Timestamp()> m_now;
    std::shared_ptr<LocalTwin> m_twin;
    HttpService m_http;
    std::atomic<int> m_commandSeq{0};
    std::string m_lastCommandId;
  };
}  // namespace agritwin::sim
