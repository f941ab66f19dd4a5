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

#include "agritwin/hub/twin_hub.hpp"

#include <chrono>
#include <filesystem>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/geometry.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/vocab/ids.hpp"

namespace agritwin::hub
{
  namespace
  {
    Timestamp wallClock()
    {
      auto sinceEpoch = std::chrono::system_clock::now().time_since_epoch();
      return Timestamp::fromMillis(
        std::chrono::duration_cast<std::chrono::milliseconds>(sinceEpoch).count());
    }

    std::optional<TagValue> scalarize(const TypedValue &value)
    {
      switch (datatypeOf(value))
      {
        case Datatype::Decimal:
          return TagValue(std::get<double>(value));
        case Datatype::Integer:
          return TagValue(static_cast<double>(std::get<std::int64_t>(value)));
        case Datatype::Text:
          return TagValue(std::get<std::string>(value));
        default:
          return std::nullopt;
      }
    }
  }  // namespace

  TwinHub::TwinHub(Config config)
    : m_config(std::move(config)),
      m_vocabulary(m_config.vocabulary),
      m_now(m_config.now ? m_config.now : wallClock),
      m_registry(m_vocabulary)
  {
    if (!m_vocabulary)
      throw Error(ErrorCode::BadConfig, "hub requires a vocabulary");
  }

  TwinHub::~TwinHub() { stop(); }

  void TwinHub::start()
  {
    if (!m_config.dataDir.empty())
      std::filesystem::create_directories(m_config.dataDir);

    mountRoutes();
    m_http.start(m_config.host, m_config.port);
    restorePersisted();
  }

  void TwinHub::stop() { m_http.stop(); }

  std::string TwinHub::endpointFor(const TwinId &id) const
  {
    return "http://" + m_config.host + ":" + std::to_string(m_config.port) + "/twins/" +
           id.value;
  }

  std::string TwinHub::hostFieldTwin(TwinShell model)
  {
    if (model.kind != TwinKind::FieldTwin)
      throw Error(ErrorCode::InvalidArgument,
                  "only field twins are hosted on the hub; '" + model.id.value +
                    "' is a " + std::string(toString(model.kind)));
    return hostInternal(std::move(model), true);
  }

  std::string TwinHub::hostInternal(TwinShell model, bool fresh)
  {
    TwinId id = model.id;
    {
      std::lock_guard lock(m_twinsMutex);
      if (m_twins.count(id.value))
        throw Error(ErrorCode::DuplicateTwinId,
                    "twin '" + id.value + "' is already hosted");
    }

    ShellDescriptor descriptor = describe(model);
    descriptor.endpoint = endpointFor(id);
    m_registry.registerTwin(descriptor, {}, m_now());

    auto twin = std::make_shared<LocalTwin>(std::move(model));

    std::shared_ptr<TwinLog> log;
    if (!m_config.dataDir.empty())
    {
      log = std::make_shared<TwinLog>(TwinLog::fileFor(m_config.dataDir, id));
      if (fresh)
        log->writeModel(twin->shellCopy());
    }

    attachObservers(twin, log);
    seedFacets(twin);

    {
      std::lock_guard lock(m_twinsMutex);
      m_twins[id.value] = twin;
      if (log)
        m_logs[id.value] = log;
    }
    return descriptor.endpoint;
  }

  void TwinHub::attachObservers(const std::shared_ptr<LocalTwin> &twin,
                                const std::shared_ptr<TwinLog> &log)
  {
    twin->setWriteObserver([this, log](const WriteEvent &event) {
      if (log)
        log->append(event);

      const SemanticId &semanticId = event.element.semanticId;
      for (const auto &tagConcept : m_config.tagConcepts)
      {
        if (semanticId.value != tagConcept)
          continue;
        if (auto scalar = scalarize(event.element.value))
          m_registry.updateTag(event.twin, semanticId, *scalar);
      }
      if (semanticId.value == ids::kFieldBoundaries)
        if (const auto *polygon = std::get_if<GeoPolygon>(&event.element.value))
          m_registry.updateCentroid(event.twin, ringCentroid(*polygon));
    });
  }

  void TwinHub::seedFacets(const std::shared_ptr<LocalTwin> &twin)
  {
    ShellDescriptor descriptor = twin->describe();
    for (const auto &tagConcept : m_config.tagConcepts)
    {
      for (const auto &path : resolveBySemanticId(descriptor, SemanticId(tagConcept)))
      {
        try
        {
          if (auto scalar = scalarize(twin->readProperty(path).value))
            m_registry.updateTag(descriptor.id, SemanticId(tagConcept), *scalar);
        }
        catch (const Error &)
        {
          // operation paths have no value to denormalize
        }
      }
    }
    for (const auto &path :
         resolveBySemanticId(descriptor, SemanticId(ids::kFieldBoundaries)))
    {
      try
      {
        PropertyElement element = twin->readProperty(path);
        if (const auto *polygon = std::get_if<GeoPolygon>(&element.value))
          m_registry.updateCentroid(descriptor.id, ringCentroid(*polygon));
      }
      catch (const Error &)
      {
      }
    }
  }

  std::shared_ptr<LocalTwin> TwinHub::hostedTwin(const TwinId &id) const
  {
    std::lock_guard lock(m_twinsMutex);
    auto it = m_twins.find(id.value);
    if (it == m_twins.end())
      throw Error(ErrorCode::TwinUnavailable,
                  "twin '" + id.value + "' is not hosted on this hub");
    if (m_suspended.count(id.value))
      throw Error(ErrorCode::TwinUnavailable, "twin '" + id.value + "' is stopped");
    return it->second;
  }

  std::vector<TwinId> TwinHub::hostedTwinIds() const
  {
    std::lock_guard lock(m_twinsMutex);
    std::vector<TwinId> out;
    for (const auto &[id, twin] : m_twins)
      out.emplace_back(id);
    return out;
  }

  void TwinHub::suspendTwin(const TwinId &id)
  {
    std::lock_guard lock(m_twinsMutex);
    if (!m_twins.count(id.value))
      throw Error(ErrorCode::NotFound, "twin '" + id.value + "' is not hosted here");
    m_suspended.insert(id.value);
  }

  void TwinHub::resumeTwin(const TwinId &id)
  {
    std::lock_guard lock(m_twinsMutex);
    m_suspended.erase(id.value);
  }

  bool TwinHub::isSuspended(const TwinId &id) const
  {
    std::lock_guard lock(m_twinsMutex);
    return m_suspended.count(id.value) > 0;
  }

  void TwinHub::mountRoutes()
  {
    auto &server = m_http.server();

    vocab::mountVocabulary(server, m_vocabulary);

    server.Post("/registry/twins", jsonRoute([this](const httplib::Request &req) {
                  json body = json::parse(req.body);
                  ShellDescriptor descriptor =
                    shellDescriptorFromJson(body.at("descriptor"));
                  std::map<std::string, TagValue> tags;
                  json tagsJson = body.value("tags", json::object());
                  for (const auto &[tagId, value] : tagsJson.items())
                    tags[tagId] = tagValueFromJson(value);
                  m_registry.registerTwin(descriptor, tags, m_now());
                  return json{{"registered", descriptor.id.value}};
                }));

    server.Delete(R"(/registry/twins/(.+))",
                  jsonRoute([this](const httplib::Request &req) {
                    std::string id = httplib::detail::decode_url(req.matches[1], false);
                    m_registry.deregisterTwin(TwinId(id));
                    return json{{"deregistered", id}};
                  }));

    server.Get(R"(/registry/twins/(.+))", jsonRoute([this](const httplib::Request &req) {
                 std::string id = httplib::detail::decode_url(req.matches[1], false);
                 return toJson(m_registry.lookup(TwinId(id)));
               }));

    server.Post("/registry/query", jsonRoute([this](const httplib::Request &req) {
                  TwinQuery query = twinQueryFromJson(json::parse(req.body));
                  json out = json::array();
                  for (const TwinId &id : m_registry.query(query))
                    out.push_back(id.value);
                  return out;
                }));

    mountTwinTree(server, "/twins", [this](const std::string &id) {
      std::lock_guard lock(m_twinsMutex);
      auto it = m_twins.find(id);
      if (it == m_twins.end())
        throw Error(ErrorCode::NotFound, "twin '" + id + "' is not hosted here");
      if (m_suspended.count(id))
        throw Error(ErrorCode::TwinUnavailable, "twin '" + id + "' is stopped");
      return std::shared_ptr<TwinAccess>(it->second);
    });
  }

  void TwinHub::restorePersisted()
  {
    if (m_config.dataDir.empty())
      return;
    for (const std::string &file : TwinLog::listLogs(m_config.dataDir))
      if (auto shell = TwinLog::replay(file))
        hostInternal(std::move(*shell), false);
  }

  HubClient::HubClient(std::string hubUrl, std::chrono::milliseconds timeout)
    : m_url(std::move(hubUrl)), m_timeout(timeout)
  {
  }

  nlohmann::json HubClient::request(const std::string &method, const std::string &path,
                                    const nlohmann::json *body) const
  {
    httplib::Client client(m_url);
    client.set_connection_timeout(m_timeout);
    client.set_read_timeout(m_timeout);

    httplib::Result result;
    if (method == "GET")
      result = client.Get(path);
    else if (method == "DELETE")
      result = client.Delete(path, body ? body->dump() : "", "application/json");
    else
      result = client.Post(path, body ? body->dump() : "{}", "application/json");

    if (!result)
      throw Error(ErrorCode::TwinUnavailable, "no response from hub at " + m_url);

    nlohmann::json parsed;
    if (!result->body.empty())
      parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (result->status >= 400)
    {
      if (parsed.is_object() && parsed.contains("error"))
        throw Error(errorCodeFromString(parsed["error"].value("code", "")),
                    parsed["error"].value("message", ""));
      throw Error(ErrorCode::TwinUnavailable,
                  "HTTP " + std::to_string(result->status) + " from hub");
    }
    if (parsed.is_discarded())
      throw Error(ErrorCode::ParseError, "invalid JSON from hub");
    return parsed;
  }

  void HubClient::registerTwin(const ShellDescriptor &descriptor,
                               const std::map<std::string, TagValue> &tags) const
  {
    nlohmann::json tagsJson = nlohmann::json::object();
    for (const auto &[id, value] : tags)
      tagsJson[id] = toJson(value);
    nlohmann::json body = {{"descriptor", agritwin::toJson(descriptor)},
                           {"tags", std::move(tagsJson)}};
    request("POST", "/registry/twins", &body);
  }

  void HubClient::deregisterTwin(const TwinId &id) const
  {
    request("DELETE", "/registry/twins/" + id.value, nullptr);
  }

  ShellDescriptor HubClient::lookup(const TwinId &id) const
  {
    return shellDescriptorFromJson(request("GET", "/registry/twins/" + id.value, nullptr));
  }

  std::vector<TwinId> HubClient::query(const TwinQuery &query) const
  {
    nlohmann::json body = toJson(query);
    nlohmann::json response = request("POST", "/registry/query", &body);
    std::vector<TwinId> out;
    for (const auto &id : response)
      out.emplace_back(id.get<std::string>());
    return out;
  }

  vocab::ConceptDescription HubClient::lookupConcept(const SemanticId &id) const
  {
    return vocab::conceptFromJson(request("GET", "/concepts/" + id.value, nullptr));
  }
}  // namespace agritwin::hub
