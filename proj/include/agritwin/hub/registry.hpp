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

#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "agritwin/core/shell.hpp"
#include "agritwin/vocab/vocabulary.hpp"

namespace agritwin::hub
{
  /// Scalar facet value usable in query predicates.
  using TagValue = std::variant<double, std::string>;

  struct RegistryEntry
  {
    ShellDescriptor descriptor;
    Timestamp registeredAt;
    std::map<std::string, TagValue> tags;  // semanticId -> denormalized value
    std::optional<GeoPoint> centroid;      // of the field boundary, when known
  };

  enum class Comparator
  {
    Eq,
    Lt,
    Le,
    Gt,
    Ge
  };

  const char *toString(Comparator cmp);
  Comparator comparatorFromString(const std::string &name);

  struct Predicate
  {
    SemanticId semanticId;
    Comparator cmp = Comparator::Eq;
    TagValue value;
  };

  struct GeoBox
  {
    double lonMin = 0, latMin = 0, lonMax = 0, latMax = 0;
  };

  struct TwinQuery
  {
    std::optional<TwinKind> kind;
    std::vector<Predicate> predicates;
    std::optional<GeoBox> geoBox;  // applied to the field-boundary centroid
  };

  nlohmann::json toJson(const TagValue &value);
  TagValue tagValueFromJson(const nlohmann::json &value);
  nlohmann::json toJson(const TwinQuery &query);
  TwinQuery twinQueryFromJson(const nlohmann::json &value);
  nlohmann::json toJson(const RegistryEntry &entry);

  bool matches(const RegistryEntry &entry, const TwinQuery &query);

  /// One entry per TwinId; concurrent lookups, serialized registration.
  class Registry
  {
  public:
    explicit Registry(std::shared_ptr<const vocab::Vocabulary> vocabulary);

    /// Validates the closed-world property: every semantic id in the
    /// descriptor and every tag id must resolve in the vocabulary.
    /// Throws Error{DuplicateTwinId | UnresolvableSemanticId}.
    void registerTwin(const ShellDescriptor &descriptor,
                      const std::map<std::string, TagValue> &tags, Timestamp at);

    /// Throws Error{NotFound}. A second call for the same id also throws.
    void deregisterTwin(const TwinId &id);

    /// Throws Error{NotFound}.
    ShellDescriptor lookup(const TwinId &id) const;
    RegistryEntry entry(const TwinId &id) const;

    /// Exactly the registered twins satisfying all query clauses, ordered
    /// lexicographically by twin id. Throws Error{UnresolvableSemanticId}.
    std::vector<TwinId> query(const TwinQuery &query) const;

    std::vector<RegistryEntry> entries() const;
    bool containsTwin(const TwinId &id) const;

    void updateTag(const TwinId &id, const SemanticId &semanticId, TagValue value);
    void updateCentroid(const TwinId &id, GeoPoint centroid);

  private:
    std::shared_ptr<const vocab::Vocabulary> m_vocabulary;
    mutable std::shared_mutex m_mutex;
    std::map<std::string, RegistryEntry> m_entries;  // keyed by twin id
  };
}  // namespace agritwin::hub
