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

#include "agritwin/core/adapter.hpp"

#include "agritwin/core/errors.hpp"
#include "agritwin/core/json_codec.hpp"

namespace agritwin
{
  const nlohmann::json &extractNativeField(const nlohmann::json &document,
                                           const std::string &dottedPath)
  {
    const nlohmann::json *node = &document;
    std::size_t begin = 0;
    while (begin <= dottedPath.size())
    {
      std::size_t dot = dottedPath.find('.', begin);
      std::string key = dottedPath.substr(begin, dot - begin);
      if (!node->is_object() || !node->contains(key))
        throw Error(ErrorCode::DownstreamUnavailable,
                    "native document lacks field '" + dottedPath + "'");
      node = &node->at(key);
      if (dot == std::string::npos)
        break;
      begin = dot + 1;
    }
    return *node;
  }

  TypedValue convertNativeValue(const PropertyMapping &mapping,
                                const nlohmann::json &nativeValue)
  {
    switch (mapping.cast)
    {
      case Datatype::Decimal:
      {
        if (!nativeValue.is_number())
          throw Error(ErrorCode::DatatypeMismatch,
                      "native field '" + mapping.nativePath + "' is not numeric");
        return nativeValue.get<double>() * mapping.factor + mapping.offset;
      }
      case Datatype::Integer:
      {
        if (!nativeValue.is_number())
          throw Error(ErrorCode::DatatypeMismatch,
                      "native field '" + mapping.nativePath + "' is not numeric");
        double converted = nativeValue.get<double>() * mapping.factor + mapping.offset;
        return static_cast<std::int64_t>(converted);
      }
      case Datatype::Text:
      {
        if (!nativeValue.is_string())
          throw Error(ErrorCode::DatatypeMismatch,
                      "native field '" + mapping.nativePath + "' is not text");
        std::string text = nativeValue.get<std::string>();
        auto it = mapping.textMap.find(text);
        return it != mapping.textMap.end() ? it->second : text;
      }
      case Datatype::Boolean:
      {
        if (!nativeValue.is_boolean())
          throw Error(ErrorCode::DatatypeMismatch,
                      "native field '" + mapping.nativePath + "' is not boolean");
        return nativeValue.get<bool>();
      }
      case Datatype::GeoPolygon:
        return geoPolygonFromJson(nativeValue);
      case Datatype::Series:
        return timeSeriesFromJson(nativeValue);
    }
    throw Error(ErrorCode::DatatypeMismatch, "unsupported cast");
  }

  AdaptedTwin::AdaptedTwin(AdapterSpec spec, TwinShell skeleton, NativeFetch fetch,
                           std::map<std::string, LocalTwin::OperationHandler> operations)
    : m_spec(std::move(spec)), m_skeleton(std::move(skeleton)), m_fetch(std::move(fetch))
  {
    for (const auto &mapping : m_spec.mappings)
    {
      auto paths = resolveBySemanticId(m_skeleton.describe(), mapping.targetSemanticId);
      // resolveBySemanticId also returns operation paths; keep property targets only
      std::vector<std::string> propertyPaths;
      for (const auto &path : paths)
      {
        try
        {
          m_skeleton.readProperty(path);
          propertyPaths.push_back(path);
        }
        catch (const Error &)
        {
        }
      }
      if (propertyPaths.empty())
        throw Error(ErrorCode::MappingTargetMissing,
                    "no skeleton property carries '" + mapping.targetSemanticId.value +
                      "'");
      if (mapping.factor == 0.0)
        throw Error(ErrorCode::InvalidArgument,
                    "zero conversion factor for '" + mapping.targetSemanticId.value +
                      "'");
      for (const auto &path : propertyPaths)
        m_mappingByPath.emplace(path, mapping);
    }

    for (auto &[path, handler] : operations)
      m_skeleton.bindOperation(path, std::move(handler));
  }

  ShellDescriptor AdaptedTwin::describe() { return m_skeleton.describe(); }

  PropertyElement AdaptedTwin::readProperty(const std::string &path)
  {
    auto it = m_mappingByPath.find(path);
    if (it == m_mappingByPath.end())
      return m_skeleton.readProperty(path);

    NativeState state = m_fetch();
    const nlohmann::json &raw = extractNativeField(state.document, it->second.nativePath);

    PropertyElement element = m_skeleton.readProperty(path);
    element.value = convertNativeValue(it->second, raw);
    element.lastUpdated = state.sampledAt;
    return element;
  }

  bool AdaptedTwin::writeProperty(const std::string &path, const TypedValue &value,
                                  Timestamp at)
  {
    if (m_mappingByPath.count(path))
      throw Error(ErrorCode::InvalidArgument,
                  "property '" + path + "' mirrors the native system and is read-only");
    return m_skeleton.writeProperty(path, value, at);
  }

  ArgMap AdaptedTwin::invokeOperation(const std::string &path, const ArgMap &args)
  {
    return m_skeleton.invokeOperation(path, args);
  }

  void AdaptedTwin::deliverToInbox(const SemanticId &semanticId, Datatype datatype,
                                   const std::string &unit, const TypedValue &value,
                                   Timestamp at)
  {
    m_skeleton.deliverToInbox(semanticId, datatype, unit, value, at);
  }

  bool AdaptedTwin::appendToSeries(const std::string &path, const SeriesSample &sample)
  {
    return m_skeleton.appendToSeries(path, sample);
  }

  std::shared_ptr<AdaptedTwin> wrapNativeSystem(
    AdapterSpec spec, TwinShell skeleton, NativeFetch fetch,
    std::map<std::string, LocalTwin::OperationHandler> operations)
  {
    return std::make_shared<AdaptedTwin>(std::move(spec), std::move(skeleton),
                                         std::move(fetch), std::move(operations));
  }
}  // namespace agritwin
