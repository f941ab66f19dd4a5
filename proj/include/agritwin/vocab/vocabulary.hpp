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
#include <shared_mutex>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "agritwin/core/types.hpp"

namespace agritwin::vocab
{
  struct ConceptDescription
  {
    SemanticId semanticId;
    std::string preferredName;
    std::string definition;
    Datatype datatype = Datatype::Decimal;
    std::string canonicalUnit;

    bool operator==(const ConceptDescription &) const = default;
  };

  enum class Violation
  {
    Ok,
    UnknownConcept,
    DatatypeViolation,
    UnitViolation
  };

  const char *toString(Violation violation);

  /// Append-only concept registry. A concept's datatype and canonical unit
  /// are immutable once registered.
  class Vocabulary
  {
  public:
    Vocabulary() = default;

    Vocabulary(Vocabulary &&other) noexcept
    {
      std::unique_lock lock(other.m_mutex);
      m_concepts = std::move(other.m_concepts);
    }

    Vocabulary(const Vocabulary &) = delete;
    Vocabulary &operator=(const Vocabulary &) = delete;

    /// Throws Error{DuplicateConcept | InvalidArgument}.
    void registerConcept(ConceptDescription description);

    /// Throws Error{NotFound}.
    ConceptDescription lookup(const SemanticId &id) const;

    bool contains(const SemanticId &id) const;
    std::size_t size() const;
    std::vector<ConceptDescription> listConcepts() const;

    Violation validateValue(const SemanticId &id, const TypedValue &value,
                            const std::string &unit) const;

    static Vocabulary fromJson(const nlohmann::json &seed);
    static Vocabulary fromSeedFile(const std::string &path);

  private:
    mutable std::shared_mutex m_mutex;
    std::map<std::string, ConceptDescription> m_concepts;
  };

  nlohmann::json toJson(const ConceptDescription &description);
  ConceptDescription conceptFromJson(const nlohmann::json &value);

  // HTTP surface: GET /concepts/{urlencoded-semanticId}, POST /concepts.
  void mountVocabulary(httplib::Server &server, std::shared_ptr<Vocabulary> vocabulary);
}  // namespace agritwin::vocab
