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

#include "agritwin/hub/registry.hpp"

#include <algorithm>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/json_codec.hpp"

namespace agritwin::hub
{
  const char *toString(Comparator cmp)
  {
    switch (cmp)
    {
      case Comparator::Eq:
        return "=";
      case Comparator::Lt:
        return "<";
      case Comparator::Le:
        return "<=";
      case Comparator::Gt:
        return ">";
      case Comparator::Ge:
        return ">=";
    }
    return "=";
  }

  Comparator comparatorFromString(const std::string &name)
  {
    if (name == "=" || name == "==")
      return Comparator::Eq;
    if (name == "<")
      return Comparator::Lt;
    if (name == "<=")
      return Comparator::Le;
    if (name == ">")
      return Comparator::Gt;
    if (name == ">=")
      return Comparator::Ge;
    throw Error(ErrorCode::ParseError, "unknown comparator '" + name + "'");
  }

  nlohmann::json toJson(const TagValue &value)
  {
    if (const auto *number = std::get_if<double>(&value))
      return *number;
    return std::get<std::string>(value);
  }

  TagValue tagValueFromJson(const nlohmann::json &value)
  {
    if (value.is_number())
      return value.get<double>();
    if (value.is_string())
      return value.get<std::string>();
    throw Error(ErrorCode::ParseError, "tag values must be numbers or strings");
  }

  namespace
  {
    template <typename T>
    bool compare(Comparator cmp, const T &lhs, const T &rhs)
    {
      switch (cmp)
      {
        case Comparator::Eq:
          return lhs == rhs;
        case Comparator::Lt:
          return lhs < rhs;
        case Comparator::Le:
          return lhs <= rhs;
        case Comparator::Gt:
          return lhs > rhs;
        case Comparator::Ge:
          return lhs >= rhs;
      }
      return false;
    }
  }  // namespace

  nlohmann::json toJson(const TwinQuery &query)
  {
    nlohmann::json predicates = nlohmann::json::array();
    for (const auto &predicate : query.predicates)
      predicates.push_back({{"semanticId", predicate.semanticId.value},
                            {"cmp", toString(predicate.cmp)},
                            {"value", toJson(predicate.value)}});

    nlohmann::json out = {{"predicates", std::move(predicates)}};
    if (query.kind)
      out["kind"] = agritwin::toString(*query.kind);
    if (query.geoBox)
      out["geoBox"] = {query.geoBox->lonMin, query.geoBox->latMin, query.geoBox->lonMax,
                       query.geoBox->latMax};
    return out;
  }

  TwinQuery twinQueryFromJson(const nlohmann::json &value)
  {
    TwinQuery query;
    if (value.contains("kind"))
      query.kind = twinKindFromString(value.at("kind").get<std::string>());
    for (const auto &predicateJson : value.value("predicates", nlohmann::json::array()))
      query.predicates.push_back(
        {SemanticId(predicateJson.at("semanticId").get<std::string>()),
         comparatorFromString(predicateJson.at("cmp").get<std::string>()),
         tagValueFromJson(predicateJson.at("value"))});
    if (value.contains("geoBox"))
    {
      const auto &box = value.at("geoBox");
      if (!box.is_array() || box.size() != 4)
        throw Error(ErrorCode::ParseError,
                    "geoBox must be [lonMin, latMin, lonMax, latMax]");
      query.geoBox = GeoBox{box[0].get<double>(), box[1].get<double>(),
                            box[2].get<double>(), box[3].get<double>()};
    }
    return query;
  }

  nlohmann::json toJson(const RegistryEntry &entry)
  {
    nlohmann::json tags = nlohmann::json::object();
    for (const auto &[id, value] : entry.tags)
      tags[id] = toJson(value);

    nlohmann::json out = {{"descriptor", agritwin::toJson(entry.descriptor)},
                          {"registeredAt", entry.registeredAt.toIso8601()},
                          {"tags", std::move(tags)}};
    if (entry.centroid)
      out["centroid"] = {entry.centroid->lon, entry.centroid->lat};
    return out;
  }

  bool matches(const RegistryEntry &entry, const TwinQuery &query)
  {
    if (query.kind && entry.descriptor.kind != *query.kind)
      return false;

    for (const auto &predicate : query.predicates)
    {
      auto it = entry.tags.find(predicate.semanticId.value);
      if (it == entry.tags.end())
        return false;
      if (it->second.index() != predicate.value.index())
        return false;
      bool satisfied =
        std::holds_alternative<double>(it->second)
          ? compare(predicate.cmp, std::get<double>(it->second),
                    std::get<double>(predicate.value))
          : compare(predicate.cmp, std::get<std::string>(it->second),
                    std::get<std::string>(predicate.value));
      if (!satisfied)
        return false;
    }

    if (query.geoBox)
    {
      if (!entry.centroid)
        return false;
      const GeoBox &box = *query.geoBox;
      const GeoPoint &c = *entry.centroid;
      if (c.lon < box.lonMin || c.lon > box.lonMax || c.lat < box.latMin ||
          c.lat > box.latMax)
        return false;
    }
    return true;
  }

  Registry::Registry(std::shared_ptr<const vocab::Vocabulary> vocabulary)
    : m_vocabulary(std::move(vocabulary))
  {
  }

  void Registry::registerTwin(const ShellDescriptor &descriptor,
                              const std::map<std::string, TagValue> &tags, Timestamp at)
  {
    for (const SemanticId &id : allSemanticIds(descriptor))
      if (!m_vocabulary->contains(id))
        throw Error(ErrorCode::UnresolvableSemanticId,
                    "'" + id.value + "' in twin '" + descriptor.id.value +
                      "' does not resolve in the vocabulary");
    for (const auto &[tagId, value] : tags)
      if (!m_vocabulary->contains(SemanticId(tagId)))
        throw Error(ErrorCode::UnresolvableSemanticId,
                    "tag id '" + tagId + "' does not resolve in the vocabulary");

    std::unique_lock lock(m_mutex);
    auto [it, inserted] =
      m_entries.emplace(descriptor.id.value, RegistryEntry{descriptor, at, tags, {}});
    if (!inserted)
      throw Error(ErrorCode::DuplicateTwinId,
                  "twin '" + descriptor.id.value + "' is already registered");
  }

  void Registry::deregisterTwin(const TwinId &id)
  {
    std::unique_lock lock(m_mutex);
    if (m_entries.erase(id.value) == 0)
      throw Error(ErrorCode::NotFound, "twin '" + id.value + "' is not registered");
  }

  ShellDescriptor Registry::lookup(const TwinId &id) const
  {
    return entry(id).descriptor;
  }

  RegistryEntry Registry::entry(const TwinId &id) const
  {
    std::shared_lock lock(m_mutex);
    auto it = m_entries.find(id.value);
    if (it == m_entries.end())
      throw Error(ErrorCode::NotFound, "twin '" + id.value + "' is not registered");
    return it->second;
  }

  bool Registry::containsTwin(const TwinId &id) const
  {
    std::shared_lock lock(m_mutex);
    return m_entries.count(id.value) > 0;
  }

  std::vector<TwinId> Registry::query(const TwinQuery &query) const
  {
    for (const auto &predicate : query.predicates)
      if (!m_vocabulary->contains(predicate.semanticId))
        throw Error(ErrorCode::UnresolvableSemanticId,
                    "predicate id '" + predicate.semanticId.value +
                      "' does not resolve in the vocabulary");

    std::shared_lock lock(m_mutex);
    std::vector<TwinId> out;
    for (const auto &[id, entry] : m_entries)  // map order = lexicographic by id
      if (matches(entry, query))
        out.emplace_back(id);
    return out;
  }

  std::vector<RegistryEntry> Registry::entries() const
  {
    std::shared_lock lock(m_mutex);
    std::vector<RegistryEntry> out;
    out.reserve(m_entries.size());
    for (const auto &[id, entry] : m_entries)
      out.push_back(entry);
    return out;
  }

  void Registry::updateTag(const TwinId &id, const SemanticId &semanticId, TagValue value)
  {
    std::unique_lock lock(m_mutex);
    auto it = m_entries.find(id.value);
    if (it == m_entries.end())
      return;  // twin vanished between write and refresh
    it->second.tags[semanticId.value] = std::move(value);
  }

  void Registry::updateCentroid(const TwinId &id, GeoPoint centroid)
  {
    std::unique_lock lock(m_mutex);
    auto it = m_entries.find(id.value);
    if (it == m_entries.end())
      return;
    it->second.centroid = centroid;
  }
}  // namespace agritwin::hub
