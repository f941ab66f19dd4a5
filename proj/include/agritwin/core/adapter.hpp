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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agritwin/core/twin_access.hpp"

namespace agritwin
{
  /// One native field mapped onto one twin property. Numeric readings are
  /// normalized as twinValue = nativeValue * factor + offset; text readings
  /// may pass through a vendor-term translation table.
  struct PropertyMapping
  {
    std::string nativePath;  // dotted path into the native state document
    SemanticId targetSemanticId;
    double factor = 1.0;
    double offset = 0.0;
    Datatype cast = Datatype::Decimal;
    std::map<std::string, std::string> textMap;  // vendor term -> canonical term
  };

  struct AdapterSpec
  {
    std::string nativeEndpoint;
    std::vector<PropertyMapping> mappings;
  };

  /// Pulls the vendor-native state document. The timestamp is the native
  /// sampling time. Throws Error{DownstreamUnavailable} when unreachable.
  struct NativeState
  {
    nlohmann::json document;
    Timestamp sampledAt;
  };
  using NativeFetch = std::function<NativeState()>;

  /// A live shell whose mapped reads pull from the vendor-native system and
  /// whose listed operations dispatch to vendor codecs. Everything else
  /// (structure, static values, inbox) behaves like a LocalTwin.
  class AdaptedTwin : public TwinAccess
  {
  public:
    AdaptedTwin(AdapterSpec spec, TwinShell skeleton, NativeFetch fetch,
                std::map<std::string, LocalTwin::OperationHandler> operations);

    ShellDescriptor describe() override;
    PropertyElement readProperty(const std::string &path) override;
    bool writeProperty(const std::string &path, const TypedValue &value,
                       Timestamp at) override;
    ArgMap invokeOperation(const std::string &path, const ArgMap &args) override;
    void deliverToInbox(const SemanticId &semanticId, Datatype datatype,
                        const std::string &unit, const TypedValue &value,
                        Timestamp at) override;
    bool appendToSeries(const std::string &path, const SeriesSample &sample) override;

    const TwinId &id() const { return m_skeleton.id(); }

  private:
    AdapterSpec m_spec;
    LocalTwin m_skeleton;
    NativeFetch m_fetch;
    std::map<std::string, PropertyMapping> m_mappingByPath;  // twin path -> mapping
  };

  /// Validates the spec against the skeleton and returns the live twin.
  /// Throws Error{MappingTargetMissing | InvalidArgument}.
  std::shared_ptr<AdaptedTwin> wrapNativeSystem(
    AdapterSpec spec, TwinShell skeleton, NativeFetch fetch,
    std::map<std::string, LocalTwin::OperationHandler> operations);

  /// Extracts a dotted path ("a.b.c") from a JSON document.
  /// Throws Error{DownstreamUnavailable} when the path is absent.
  const nlohmann::json &extractNativeField(const nlohmann::json &document,
                                           const std::string &dottedPath);

  /// Applies one mapping to a raw native value.
  TypedValue convertNativeValue(const PropertyMapping &mapping,
                                const nlohmann::json &nativeValue);
}  // namespace agritwin
