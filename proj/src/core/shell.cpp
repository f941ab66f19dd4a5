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

#include "agritwin/core/shell.hpp"

#include <set>

#include "agritwin/core/digest.hpp"
#include "agritwin/core/errors.hpp"
#include "agritwin/core/json_codec.hpp"
#include "agritwin/vocab/vocabulary.hpp"

namespace agritwin
{
  namespace
  {
    const std::string &elementName(const SubmodelElement &element)
    {
      if (const auto *property = std::get_if<PropertyElement>(&element))
        return property->shortName;
      return std::get<OperationElement>(element).shortName;
    }

    const SemanticId &elementSemanticId(const SubmodelElement &element)
    {
      if (const auto *property = std::get_if<PropertyElement>(&element))
        return property->semanticId;
      return std::get<OperationElement>(element).semanticId;
    }

    void validateParameters(const std::vector<ParameterSpec> &params,
                            const std::string &context)
    {
      std::set<std::string> names;
      for (const auto &param : params)
      {
        if (param.name.empty())
          throw Error(ErrorCode::InvalidArgument, context + ": empty parameter name");
        if (!names.insert(param.name).second)
          throw Error(ErrorCode::DuplicateElementName,
                      context + ": duplicate parameter '" + param.name + "'");
      }
    }

    void validateSubmodel(const Submodel &submodel)
    {
      if (submodel.shortName.empty())
        throw Error(ErrorCode::InvalidArgument, "submodel with empty short name");
      if (submodel.semanticId.empty())
        throw Error(ErrorCode::InvalidArgument,
                    "submodel '" + submodel.shortName + "' lacks a semantic id");

      std::set<std::string> names;
      for (const auto &element : submodel.elements)
      {
        const std::string &name = elementName(element);
        if (name.empty())
          throw Error(ErrorCode::InvalidArgument,
                      "element with empty short name in submodel '" +
                        submodel.shortName + "'");
        if (!names.insert(name).second)
          throw Error(ErrorCode::DuplicateElementName,
                      "element '" + name + "' duplicated in submodel '" +
                        submodel.shortName + "'");
        if (elementSemanticId(element).empty())
          throw Error(ErrorCode::InvalidArgument,
                      "element '" + submodel.shortName + "/" + name +
                        "' lacks a semantic id");

        if (const auto *property = std::get_if<PropertyElement>(&element))
        {
          if (datatypeOf(property->value) != property->datatype)
            throw Error(ErrorCode::DatatypeMismatch,
                        "value of '" + submodel.shortName + "/" + name +
                          "' does not conform to datatype " +
                          toString(property->datatype));
        }
        else
        {
          const auto &operation = std::get<OperationElement>(element);
          validateParameters(operation.inputs, submodel.shortName + "/" + name + " inputs");
          validateParameters(operation.outputs,
                             submodel.shortName + "/" + name + " outputs");
        }
      }
    }

    ElementSignature signatureOf(const SubmodelElement &element)
    {
      ElementSignature signature;
      if (const auto *property = std::get_if<PropertyElement>(&element))
      {
        signature.shortName = property->shortName;
        signature.semanticId = property->semanticId;
        signature.kind = ElementKind::Property;
        signature.datatype = property->datatype;
        signature.unit = property->unit;
      }
      else
      {
        const auto &operation = std::get<OperationElement>(element);
        signature.shortName = operation.shortName;
        signature.semanticId = operation.semanticId;
        signature.kind = ElementKind::Operation;
        signature.inputs = operation.inputs;
        signature.outputs = operation.outputs;
      }
      return signature;
    }
  }  // namespace

  TwinShell createShell(TwinId id, TwinKind kind, std::vector<Submodel> submodels,
                        const vocab::Vocabulary *vocabulary)
  {
    if (id.empty())
      throw Error(ErrorCode::InvalidArgument, "twin id must be non-empty");

    std::set<std::string> submodelNames;
    for (const auto &submodel : submodels)
    {
      validateSubmodel(submodel);
      if (!submodelNames.insert(submodel.shortName).second)
        throw Error(ErrorCode::DuplicateElementName,
                    "submodel '" + submodel.shortName + "' duplicated in shell");
    }

    TwinShell shell{std::move(id), kind, std::move(submodels)};

    if (vocabulary)
    {
      for (const SemanticId &semanticId : allSemanticIds(describe(shell)))
      {
        if (!vocabulary->contains(semanticId))
          throw Error(ErrorCode::UnresolvableSemanticId,
                      "'" + semanticId.value + "' does not resolve in the vocabulary");
      }
    }
    return shell;
  }

  ShellDescriptor describe(const TwinShell &shell)
  {
    ShellDescriptor descriptor;
    descriptor.id = shell.id;
    descriptor.kind = shell.kind;

    for (const auto &submodel : shell.submodels)
    {
      SubmodelDigest digest;
      digest.shortName = submodel.shortName;
      digest.semanticId = submodel.semanticId;
      for (const auto &element : submodel.elements)
        digest.elements.push_back(signatureOf(element));
      descriptor.submodels.push_back(std::move(digest));
    }

    // Hash over the structure only; the endpoint is deployment data.
    json canonical = toJson(descriptor);
    canonical.erase("endpoint");
    canonical.erase("structureHash");
    descriptor.structureHash = hexDigest(canonical.dump());
    return descriptor;
  }

  std::string joinPath(const std::string &submodel, const std::string &element)
  {
    return submodel + "/" + element;
  }

  std::pair<std::string, std::string> splitPath(const std::string &path)
  {
    auto slash = path.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == path.size())
      throw Error(ErrorCode::PathNotFound, "malformed element path '" + path + "'");
    return {path.substr(0, slash), path.substr(slash + 1)};
  }

  namespace
  {
    template <typename Shell>
    auto *findElement(Shell &shell, const std::string &path)
    {
      auto [submodelName, elementName] = splitPath(path);
      for (auto &submodel : shell.submodels)
      {
        if (submodel.shortName != submodelName)
          continue;
        for (auto &element : submodel.elements)
        {
          if (const auto *property = std::get_if<PropertyElement>(&element))
          {
            if (property->shortName == elementName)
              return &element;
          }
          else if (std::get<OperationElement>(element).shortName == elementName)
          {
            return &element;
          }
        }
      }
      return static_cast<decltype(&shell.submodels.front().elements.front())>(nullptr);
    }
  }  // namespace

  const PropertyElement &getProperty(const TwinShell &shell, const std::string &path)
  {
    const auto *element = findElement(shell, path);
    if (!element || !std::holds_alternative<PropertyElement>(*element))
      throw Error(ErrorCode::PathNotFound, "no property at '" + path + "'");
    return std::get<PropertyElement>(*element);
  }

  const OperationElement &getOperation(const TwinShell &shell, const std::string &path)
  {
    const auto *element = findElement(shell, path);
    if (!element || !std::holds_alternative<OperationElement>(*element))
      throw Error(ErrorCode::PathNotFound, "no operation at '" + path + "'");
    return std::get<OperationElement>(*element);
  }

  bool setProperty(TwinShell &shell, const std::string &path, const TypedValue &value,
                   Timestamp at)
  {
    auto *element = findElement(shell, path);
    if (!element || !std::holds_alternative<PropertyElement>(*element))
      throw Error(ErrorCode::PathNotFound, "no property at '" + path + "'");

    auto &property = std::get<PropertyElement>(*element);
    if (datatypeOf(value) != property.datatype)
      throw Error(ErrorCode::DatatypeMismatch,
                  "property '" + path + "' expects " + toString(property.datatype) +
                    ", got " + toString(datatypeOf(value)));

    if (at < property.lastUpdated)
      return false;  // stale write, state unchanged

    property.value = value;
    property.lastUpdated = at;
    return true;
  }

  std::vector<std::string> resolveBySemanticId(const TwinShell &shell,
                                               const SemanticId &id)
  {
    return resolveBySemanticId(describe(shell), id);
  }

  std::vector<std::string> resolveBySemanticId(const ShellDescriptor &descriptor,
                                               const SemanticId &id)
  {
    std::vector<std::string> paths;
    for (const auto &submodel : descriptor.submodels)
      for (const auto &element : submodel.elements)
        if (element.semanticId == id)
          paths.push_back(joinPath(submodel.shortName, element.shortName));
    return paths;
  }

  std::vector<SemanticId> allSemanticIds(const ShellDescriptor &descriptor)
  {
    std::vector<SemanticId> ids;
    for (const auto &submodel : descriptor.submodels)
    {
      ids.push_back(submodel.semanticId);
      for (const auto &element : submodel.elements)
        ids.push_back(element.semanticId);
    }
    return ids;
  }
}  // namespace agritwin
