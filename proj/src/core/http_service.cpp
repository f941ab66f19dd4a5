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

#include "agritwin/core/http_service.hpp"

#include <json.hpp>

namespace agritwin
{
  HttpService::HttpService() : m_server(std::make_unique<httplib::Server>()) {}

  HttpService::~HttpService() { stop(); }

  void HttpService::start(const std::string &host, int port)
  {
    if (m_running)
      throw Error(ErrorCode::BadConfig, "service already started");

    // SO_REUSEADDR for quick restarts, but no SO_REUSEPORT: a taken port
    // must fail the bind instead of silently sharing the socket
    m_server->set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void *>(&yes),
                 sizeof(yes));
    });

    if (!m_server->bind_to_port(host, port))
      throw Error(ErrorCode::PortInUse,
                  host + ":" + std::to_string(port) + " is not bindable");

    m_host = host;
    m_port = port;
    m_thread = std::thread([this] { m_server->listen_after_bind(); });
    m_server->wait_until_ready();
    m_running = true;
  }

  void HttpService::stop()
  {
    if (!m_running)
      return;
    m_server->stop();
    if (m_thread.joinable())
      m_thread.join();
    m_running = false;
  }

  std::string HttpService::baseUrl() const
  {
    return "http://" + m_host + ":" + std::to_string(m_port);
  }

  int httpStatusFor(ErrorCode code)
  {
    switch (code)
    {
      case ErrorCode::PathNotFound:
      case ErrorCode::NotFound:
      case ErrorCode::UnknownSystem:
      case ErrorCode::ItemNotFoundOnSource:
      case ErrorCode::NoRecipeForProcess:
      case ErrorCode::ScenarioUnknown:
        return 404;
      case ErrorCode::DuplicateConcept:
      case ErrorCode::DuplicateTwinId:
        return 409;
      case ErrorCode::AccessNotGranted:
        return 403;
      case ErrorCode::TwinUnavailable:
      case ErrorCode::DownstreamUnavailable:
        return 503;
      default:
        return 400;
    }
  }

  void sendError(httplib::Response &res, const Error &error)
  {
    nlohmann::json body = {
      {"error", {{"code", toString(error.code())}, {"message", error.detail()}}}};
    res.status = httpStatusFor(error.code());
    res.set_content(body.dump(), "application/json");
  }

  httplib::Server::Handler jsonRoute(JsonHandler handler)
  {
    return [handler = std::move(handler)](const httplib::Request &req,
                                          httplib::Response &res) {
      try
      {
        nlohmann::json body = handler(req);
        res.status = 200;
        res.set_content(body.dump(), "application/json");
      }
      catch (const Error &error)
      {
        sendError(res, error);
      }
      catch (const nlohmann::json::exception &e)
      {
        sendError(res, Error(ErrorCode::ParseError, e.what()));
      }
      catch (const std::exception &e)
      {
        res.status = 500;
        nlohmann::json body = {
          {"error", {{"code", "InternalError"}, {"message", e.what()}}}};
        res.set_content(body.dump(), "application/json");
      }
    };
  }
}  // namespace agritwin
