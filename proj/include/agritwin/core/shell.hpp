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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "agritwin/core/types.hpp"

namespace agritwin
{
  namespace vocab
  {
    class Vocabulary;
  }

  struct PropertyElement
  {
    std::string shortName;
    SemanticId semanticId;
    Datatype datatype = Datatype::Decimal;
    std::string unit;  // UCUM-style code, e.g. "kg/ha"
    TypedValue value;
    Timestamp lastUpdated;
  };

  struct ParameterSpec
  {
    std::string name;
    Datatype datatype = Datatype::Decimal;
    std::string unit;

    bool operator==(const ParameterSpec &) const = default;
  };

  struct OperationElement
  {
    std::string shortName;
    SemanticId semanticId;
    std::vector<ParameterSpec> inputs;
    std::vector<ParameterSpec> outputs;
  };

  using SubmodelElement = std::variant<PropertyElement, OperationElement>;

  struct Submodel
  {
    std::string shortName;
    SemanticId semanticId;
    std::vector<SubmodelElement> elements;
  };

  /// The digital representative of a system or field: identity plus an ordered
  /// set of semantically annotated submodels.
  struct TwinShell
  {
    TwinId id;
    TwinKind kind = TwinKind::SystemTwin;
    std::vector<Submodel> submodels;
  };

  enum class ElementKind
  {
    Property,
    Operation
  };

  /// Structure-only signature of one submodel element. Property signatures
  /// carry datatype and unit; operation signatures carry both parameter lists.
  struct ElementSignature
  {
    std::string shortName;
    SemanticId semanticId;
    ElementKind kind = ElementKind::Property;
    Datatype datatype = Datatype::Decimal;
    std::string unit;
    std::vector<ParameterSpec> inputs;
    std::vector<ParameterSpec> outputs;

    bool operator==(const ElementSignature &) const = default;
  };

  struct SubmodelDigest
  {
    std::string shortName;
    SemanticId semanticId;
    std::vector<ElementSignature> elements;

    bool operator==(const SubmodelDigest &) const = default;
  };

  /// Reflection surface of a shell: everything a caller needs to address the
  /// twin without compile-time knowledge of it. Never carries property values.
  struct ShellDescriptor
  {
    TwinId id;
    TwinKind kind = TwinKind::SystemTwin;
    std::string endpoint;
    std::vector<SubmodelDigest> submodels;
    std::string structureHash;

    bool operator==(const ShellDescriptor &) const = default;
  };

  /// Validates structure and returns the shell. When a vocabulary is supplied,
  /// every semantic id must resolve in it.
  /// Throws Error{InvalidArgument | DuplicateElementName | UnresolvableSemanticId}.
  TwinShell createShell(TwinId id, TwinKind kind, std::vector<Submodel> submodels,
                        const vocab::Vocabulary *vocabulary = nullptr);

  /// Structure-only descriptor; invariant under property writes. The endpoint
  /// field is left empty and is filled in at hosting/registration time.
  ShellDescriptor describe(const TwinShell &shell);

  /// Element addressing uses "submodel/element" paths.
  std::string joinPath(const std::string &submodel, const std::string &element);
  std::pair<std::string, std::string> splitPath(const std::string &path);

  const PropertyElement &getProperty(const TwinShell &shell, const std::string &path);
  const OperationElement &getOperation(const TwinShell &shell, const std::string &path);

  /// Last-writer-wins by source timestamp: returns false (state unchanged)
  /// when `at` precedes the element's lastUpdated.
  /// Throws Error{PathNotFound | DatatypeMismatch}.
  bool setProperty(TwinShell &shell, const std::string &path, const TypedValue &value,
                   Timestamp at);

  /// All element paths carrying the given semantic id, in submodel order.
  std::vector<std::string> resolveBySemanticId(const TwinShell &shell, const SemanticId &id);
  std::vector<std::string> resolveBySemanticId(const ShellDescriptor &descriptor,
                                               const SemanticId &id);

  /// Every semantic id referenced anywhere in the descriptor (submodels and
  /// elements), in document order with duplicates preserved.
  std::vector<SemanticId> allSemanticIds(const ShellDescriptor &descriptor);
}  // namespace agritwin
