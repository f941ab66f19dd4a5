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

#include "agritwin/vocab/vocabulary.hpp"

#include <fstream>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/http_service.hpp"

namespace agritwin::vocab
{
  const char *toString(Violation violation)
  {
    switch (violation)
    {
      case Violation::Ok:
        return "Ok";
      case Violation::UnknownConcept:
        return "UnknownConcept";
      case Violation::DatatypeViolation:
        return "DatatypeViolation";
      case Violation::UnitViolation:
        return "UnitViolation";
    }
    return "Ok";
  }

  void Vocabulary::registerConcept(ConceptDescription description)
  {
    if (description.semanticId.empty())
      throw Error(ErrorCode::InvalidArgument, "concept lacks a semantic id");
    if (description.canonicalUnit.empty())
      throw Error(ErrorCode::InvalidArgument,
                  "concept '" + description.semanticId.value + "' lacks a canonical unit");

    std::unique_lock lock(m_mutex);
    auto [it, inserted] =
      m_concepts.emplace(description.semanticId.value, std::move(description));
    if (!inserted)
      throw Error(ErrorCode::DuplicateConcept,
                  "'" + it->first + "' is already registered");
  }

  ConceptDescription Vocabulary::lookup(const SemanticId &id) const
  {
    std::shared_lock lock(m_mutex);
    auto it = m_concepts.find(id.value);
    if (it == m_concepts.end())
      throw Error(ErrorCode::NotFound, "no concept '" + id.value + "'");
    return it->second;
  }

  bool Vocabulary::contains(const SemanticId &id) const
  {
    std::shared_lock lock(m_mutex);
    return m_concepts.count(id.value) > 0;
  }

  std::size_t Vocabulary::size() const
  {
    std::shared_lock lock(m_mutex);
    return m_concepts.size();
  }

  std::vector<ConceptDescription> Vocabulary::listConcepts() const
  {
    std::shared_lock lock(m_mutex);
    std::vector<ConceptDescription> out;
    out.reserve(m_concepts.size());
    for (const auto &[id, description] : m_concepts)
      out.push_back(description);
    return out;
  }

  Violation Vocabulary::validateValue(const SemanticId &id, const TypedValue &value,
                                      const std::string &unit) const
  {
    std::shared_lock lock(m_mutex);
    auto it = m_concepts.find(id.value);
    if (it == m_concepts.end())
      return Violation::UnknownConcept;
    if (datatypeOf(value) != it->second.datatype)
      return Violation::DatatypeViolation;
    if (unit != it->second.canonicalUnit)
      return Violation::UnitViolation;
    return Violation::Ok;
  }

  nlohmann::json toJson(const ConceptDescription &description)
  {
    return {{"semanticId", description.semanticId.value},
            {"preferredName", description.preferredName},
            {"definition", description.definition},
            {"datatype", toString(description.datatype)},
            {"canonicalUnit", description.canonicalUnit}};
  }

  ConceptDescription conceptFromJson(const nlohmann::json &value)
  {
    return {SemanticId(value.at("semanticId").get<std::string>()),
            value.value("preferredName", std::string()),
            value.value("definition", std::string()),
            datatypeFromString(value.at("datatype").get<std::string>()),
            value.at("canonicalUnit").get<std::string>()};
  }

  Vocabulary Vocabulary::fromJson(const nlohmann::json &seed)
  {
    if (!seed.is_array())
      throw Error(ErrorCode::ParseError, "vocabulary seed must be a JSON array");

    Vocabulary vocabulary;
    for (const auto &entry : seed)
      vocabulary.registerConcept(conceptFromJson(entry));
    return vocabulary;
  }

  Vocabulary Vocabulary::fromSeedFile(const std::string &path)
  {
    std::ifstream in(path);
    if (!in)
      throw Error(ErrorCode::BadConfig, "cannot open vocabulary seed '" + path + "'");
    nlohmann::json seed = nlohmann::json::parse(in, nullptr, false);
    if (seed.is_discarded())
      throw Error(ErrorCode::ParseError, "vocabulary seed '" + path + "' is not JSON");
    return fromJson(seed);
  }

  void mountVocabulary(httplib::Server &server, std::shared_ptr<Vocabulary> vocabulary)
  {
    server.Get(R"(/concepts/(.+))", jsonRoute([vocabulary](const httplib::Request &req) {
                 std::string id = req.matches[1];
                 return toJson(vocabulary->lookup(SemanticId(httplib::detail::decode_url(id, false))));
               }));

    server.Post("/concepts", jsonRoute([vocabulary](const httplib::Request &req) {
                  ConceptDescription description =
                    conceptFromJson(nlohmann::json::parse(req.body));
                  vocabulary->registerConcept(description);
                  return nlohmann::json{{"registered", description.semanticId.value}};
                }));
  }
}  // namespace agritwin::vocab
