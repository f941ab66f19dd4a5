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

#include <chrono>
#include <functional>
#include <memory>
#include <string>

#include <httplib.h>

#include "agritwin/core/twin_access.hpp"

namespace agritwin
{
  // Standard twin endpoint schema, mounted under a prefix:
  //   GET  {prefix}/shell
  //   GET  {prefix}/submodels/{sm}/elements/{el}
  //   PUT  {prefix}/submodels/{sm}/elements/{el}         {value, at}
  //   POST {prefix}/submodels/{sm}/operations/{op}/invoke {args:{...}}
  //   POST {prefix}/inbox                                 {semanticId, datatype, unit, value, at}
  void mountTwin(httplib::Server &server, const std::string &prefix,
                 std::shared_ptr<TwinAccess> twin,
                 std::function<bool()> available = {});

  /// Same schema under "{base}/{twinId}/..." with one route set serving many
  /// twins. The resolver throws Error{NotFound | TwinUnavailable}.
  using TwinResolver = std::function<std::shared_ptr<TwinAccess>(const std::string &id)>;
  void mountTwinTree(httplib::Server &server, const std::string &base,
                     TwinResolver resolver);

  /// Client side of the twin endpoint schema. Transport failures and timeouts
  /// surface as Error{TwinUnavailable}; error bodies are re-thrown typed.
  class HttpTwin : public TwinAccess
  {
  public:
    explicit HttpTwin(std::string endpoint,
                      std::chrono::milliseconds timeout = std::chrono::seconds(5));

    ShellDescriptor describe() override;
    PropertyElement readProperty(const std::string &path) override;
    bool writeProperty(const std::string &path, const TypedValue &value,
                       Timestamp at) override;
    ArgMap invokeOperation(const std::string &path, const ArgMap &args) override;
    void deliverToInbox(const SemanticId &semanticId, Datatype datatype,
                        const std::string &unit, const TypedValue &value,
                        Timestamp at) override;
    bool appendToSeries(const std::string &path, const SeriesSample &sample) override;

    const std::string &endpoint() const { return m_endpoint; }

  private:
    nlohmann::json get(const std::string &path);
    nlohmann::json send(const std::string &method, const std::string &path,
                        const nlohmann::json &body);

    std::string m_endpoint;  // e.g. "http://127.0.0.1:7800/twins/field-7"
    std::string m_hostPort;  // scheme://host:port
    std::string m_prefix;    // path prefix, possibly empty
    std::chrono::milliseconds m_timeout;
  };

  /// Splits "http://host:port/some/prefix" into host:port and prefix parts.
  std::pair<std::string, std::string> splitEndpoint(const std::string &endpoint);
}  // namespace agritwin
