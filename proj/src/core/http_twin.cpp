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

#include "agritwin/core/http_twin.hpp"

#include "agritwin/core/errors.hpp"
#include "agritwin/core/http_service.hpp"
#include "agritwin/core/json_codec.hpp"

namespace agritwin
{
  namespace
  {
    std::string regexEscape(const std::string &text)
    {
      std::string out;
      for (char c : text)
      {
        if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos)
          out.push_back('\\');
        out.push_back(c);
      }
      return out;
    }

    std::vector<ParameterSpec> findOperationInputs(const ShellDescriptor &descriptor,
                                                   const std::string &submodel,
                                                   const std::string &operation,
                                                   std::vector<ParameterSpec> *outputs)
    {
      for (const auto &sm : descriptor.submodels)
      {
        if (sm.shortName != submodel)
          continue;
        for (const auto &element : sm.elements)
        {
          if (element.kind == ElementKind::Operation && element.shortName == operation)
          {
            if (outputs)
              *outputs = element.outputs;
            return element.inputs;
          }
        }
      }
      throw Error(ErrorCode::PathNotFound,
                  "no operation at '" + joinPath(submodel, operation) + "'");
    }

    Datatype findPropertyDatatype(const ShellDescriptor &descriptor,
                                  const std::string &submodel, const std::string &element)
    {
      for (const auto &sm : descriptor.submodels)
      {
        if (sm.shortName != submodel)
          continue;
        for (const auto &el : sm.elements)
          if (el.kind == ElementKind::Property && el.shortName == element)
            return el.datatype;
      }
      throw Error(ErrorCode::PathNotFound,
                  "no property at '" + joinPath(submodel, element) + "'");
    }
  }  // namespace

  namespace
  {
    using ResolveFromRequest =
      std::function<std::shared_ptr<TwinAccess>(const httplib::Request &)>;

    // `shift` is the number of leading capture groups consumed by the prefix.
    void registerTwinRoutes(httplib::Server &server, const std::string &pattern,
                            std::size_t shift, ResolveFromRequest resolve)
    {
      server.Get(pattern + "/shell",
                 jsonRoute([resolve](const httplib::Request &req) {
                   return toJson(resolve(req)->describe());
                 }));

      server.Get(pattern + R"(/submodels/([^/]+)/elements/([^/]+))",
                 jsonRoute([resolve, shift](const httplib::Request &req) {
                   auto twin = resolve(req);
                   std::string path =
                     joinPath(req.matches[shift + 1], req.matches[shift + 2]);
                   return propertyViewToJson(twin->readProperty(path));
                 }));

      server.Put(pattern + R"(/submodels/([^/]+)/elements/([^/]+))",
                 jsonRoute([resolve, shift](const httplib::Request &req) {
                   auto twin = resolve(req);
                   json body = json::parse(req.body);
                   std::string submodel = req.matches[shift + 1];
                   std::string element = req.matches[shift + 2];
                   Datatype datatype =
                     findPropertyDatatype(twin->describe(), submodel, element);
                   bool accepted = twin->writeProperty(
                     joinPath(submodel, element),
                     typedValueFromJson(body.at("value"), datatype),
                     Timestamp::parse(body.at("at").get<std::string>()));
                   return json{{"accepted", accepted}};
                 }));

      server.Post(pattern + R"(/submodels/([^/]+)/elements/([^/]+)/append)",
                  jsonRoute([resolve, shift](const httplib::Request &req) {
                    auto twin = resolve(req);
                    json body = json::parse(req.body);
                    std::string path =
                      joinPath(req.matches[shift + 1], req.matches[shift + 2]);
                    SeriesSample sample{
                      Timestamp::parse(body.at("at").get<std::string>()),
                      body.at("value")};
                    return json{{"accepted", twin->appendToSeries(path, sample)}};
                  }));

      server.Post(pattern + R"(/submodels/([^/]+)/operations/([^/]+)/invoke)",
                  jsonRoute([resolve, shift](const httplib::Request &req) {
                    auto twin = resolve(req);
                    json body = json::parse(req.body);
                    std::string submodel = req.matches[shift + 1];
                    std::string operation = req.matches[shift + 2];
                    std::vector<ParameterSpec> outputSpec;
                    auto inputs = findOperationInputs(twin->describe(), submodel,
                                                      operation, &outputSpec);
                    ArgMap args =
                      argMapFromJson(body.value("args", json::object()), inputs);
                    ArgMap outputs =
                      twin->invokeOperation(joinPath(submodel, operation), args);
                    return json{{"outputs", toJson(outputs, outputSpec)}};
                  }));

      server.Post(pattern + "/inbox",
                  jsonRoute([resolve](const httplib::Request &req) {
                    auto twin = resolve(req);
                    json body = json::parse(req.body);
                    Datatype datatype =
                      datatypeFromString(body.at("datatype").get<std::string>());
                    twin->deliverToInbox(
                      SemanticId(body.at("semanticId").get<std::string>()), datatype,
                      body.value("unit", std::string()),
                      typedValueFromJson(body.at("value"), datatype),
                      Timestamp::parse(body.at("at").get<std::string>()));
                    return json{{"accepted", true}};
                  }));
    }
  }  // namespace

  void mountTwin(httplib::Server &server, const std::string &prefix,
                 std::shared_ptr<TwinAccess> twin, std::function<bool()> available)
  {
    registerTwinRoutes(server, regexEscape(prefix), 0,
                       [twin, available](const httplib::Request &) {
                         if (available && !available())
                           throw Error(ErrorCode::TwinUnavailable, "twin is stopped");
                         return twin;
                       });
  }

  void mountTwinTree(httplib::Server &server, const std::string &base,
                     TwinResolver resolver)
  {
    registerTwinRoutes(server, regexEscape(base) + R"(/([^/]+))", 1,
                       [resolver](const httplib::Request &req) {
                         std::string id =
                           httplib::detail::decode_url(req.matches[1], false);
                         return resolver(id);
                       });
  }

  std::pair<std::string, std::string> splitEndpoint(const std::string &endpoint)
  {
    auto schemeEnd = endpoint.find("://");
    if (schemeEnd == std::string::npos)
      throw Error(ErrorCode::BadConfig, "endpoint '" + endpoint + "' lacks a scheme");
    auto pathStart = endpoint.find('/', schemeEnd + 3);
    if (pathStart == std::string::npos)
      return {endpoint, ""};
    return {endpoint.substr(0, pathStart), endpoint.substr(pathStart)};
  }

  HttpTwin::HttpTwin(std::string endpoint, std::chrono::milliseconds timeout)
    : m_endpoint(std::move(endpoint)), m_timeout(timeout)
  {
    std::tie(m_hostPort, m_prefix) = splitEndpoint(m_endpoint);
  }

  namespace
  {
    [[noreturn]] void throwTransport(const std::string &endpoint)
    {
      throw Error(ErrorCode::TwinUnavailable, "no response from " + endpoint);
    }

    nlohmann::json parseResponse(const httplib::Result &result,
                                 const std::string &endpoint)
    {
      if (!result)
        throwTransport(endpoint);
      nlohmann::json body;
      if (!result->body.empty())
        body = nlohmann::json::parse(result->body, nullptr, false);
      if (result->status >= 400)
      {
        if (body.is_object() && body.contains("error"))
          throw Error(errorCodeFromString(body["error"].value("code", "")),
                      body["error"].value("message", ""));
        throw Error(ErrorCode::TwinUnavailable,
                    "HTTP " + std::to_string(result->status) + " from " + endpoint);
      }
      if (body.is_discarded())
        throw Error(ErrorCode::ParseError, "invalid JSON from " + endpoint);
      return body;
    }
  }  // namespace

  nlohmann::json HttpTwin::get(const std::string &path)
  {
    httplib::Client client(m_hostPort);
    client.set_connection_timeout(m_timeout);
    client.set_read_timeout(m_timeout);
    return parseResponse(client.Get(m_prefix + path), m_endpoint);
  }

  nlohmann::json HttpTwin::send(const std::string &method, const std::string &path,
                                const nlohmann::json &body)
  {
    httplib::Client client(m_hostPort);
    client.set_connection_timeout(m_timeout);
    client.set_read_timeout(m_timeout);

    std::string payload = body.dump();
    httplib::Result result =
      method == "PUT" ? client.Put(m_prefix + path, payload, "application/json")
                      : client.Post(m_prefix + path, payload, "application/json");
    return parseResponse(result, m_endpoint);
  }

  ShellDescriptor HttpTwin::describe()
  {
    ShellDescriptor descriptor = shellDescriptorFromJson(get("/shell"));
    if (descriptor.endpoint.empty())
      descriptor.endpoint = m_endpoint;
    return descriptor;
  }

  PropertyElement HttpTwin::readProperty(const std::string &path)
  {
    auto [submodel, element] = splitPath(path);
    nlohmann::json view = get("/submodels/" + submodel + "/elements/" + element);

    PropertyElement property;
    property.shortName = element;
    property.semanticId = SemanticId(view.at("semanticId").get<std::string>());
    property.datatype = datatypeFromString(view.at("datatype").get<std::string>());
    property.unit = view.value("unit", std::string());
    property.value = typedValueFromJson(view.at("value"), property.datatype);
    property.lastUpdated = Timestamp::parse(view.at("lastUpdated").get<std::string>());
    return property;
  }

  bool HttpTwin::writeProperty(const std::string &path, const TypedValue &value,
                               Timestamp at)
  {
    auto [submodel, element] = splitPath(path);
    nlohmann::json response =
      send("PUT", "/submodels/" + submodel + "/elements/" + element,
           {{"value", toJson(value)}, {"at", at.toIso8601()}});
    return response.at("accepted").get<bool>();
  }

  ArgMap HttpTwin::invokeOperation(const std::string &path, const ArgMap &args)
  {
    auto [submodel, operation] = splitPath(path);

    std::vector<ParameterSpec> outputSpec;
    ShellDescriptor descriptor = describe();
    findOperationInputs(descriptor, submodel, operation, &outputSpec);

    nlohmann::json body = {{"args", toJson(args, {})}};
    nlohmann::json response =
      send("POST", "/submodels/" + submodel + "/operations/" + operation + "/invoke",
           body);
    return argMapFromJson(response.at("outputs"), outputSpec);
  }

  void HttpTwin::deliverToInbox(const SemanticId &semanticId, Datatype datatype,
                                const std::string &unit, const TypedValue &value,
                                Timestamp at)
  {
    send("POST", "/inbox",
         {{"semanticId", semanticId.value},
          {"datatype", toString(datatype)},
          {"unit", unit},
          {"value", toJson(value)},
          {"at", at.toIso8601()}});
  }

  bool HttpTwin::appendToSeries(const std::string &path, const SeriesSample &sample)
  {
    auto [submodel, element] = splitPath(path);
    nlohmann::json response =
      send("POST", "/submodels/" + submodel + "/elements/" + element + "/append",
           {{"at", sample.at.toIso8601()}, {"value", sample.value}});
    return response.at("accepted").get<bool>();
  }
}  // namespace agritwin
