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

#include <memory>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "agritwin/core/errors.hpp"

namespace agritwin
{
  /// Owns an httplib server plus its listener thread. Routes are registered on
  /// server() before start().
  class HttpService
  {
  public:
    HttpService();
    ~HttpService();

    HttpService(const HttpService &) = delete;
    HttpService &operator=(const HttpService &) = delete;

    httplib::Server &server() { return *m_server; }

    /// Binds and starts serving. Throws Error{PortInUse} when the port is taken.
    void start(const std::string &host, int port);
    void stop();

    bool running() const { return m_running; }
    int port() const { return m_port; }
    std::string baseUrl() const;

  private:
    std::unique_ptr<httplib::Server> m_server;
    std::thread m_thread;
    std::string m_host;
    int m_port = -1;
    bool m_running = false;
  };

  /// Error body used by every HTTP surface: {"error":{"code","message"}}.
  void sendError(httplib::Response &res, const Error &error);
  int httpStatusFor(ErrorCode code);

  /// Wraps a handler body so thrown Errors become the standard error body.
  using JsonHandler = std::function<nlohmann::json(const httplib::Request &)>;
  httplib::Server::Handler jsonRoute(JsonHandler handler);
}  // namespace agritwin
