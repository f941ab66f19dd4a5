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

#include "agritwin/core/json_codec.hpp"

#include "agritwin/core/errors.hpp"

namespace agritwin
{
  namespace
  {
    [[noreturn]] void mismatch(Datatype expected, const json &value)
    {
      throw Error(ErrorCode::DatatypeMismatch,
                  std::string("JSON value ") + value.dump() + " is not a valid " +
                    toString(expected));
    }
  }  // namespace

  json toJson(const GeoPolygon &polygon)
  {
    json out = json::array();
    for (const auto &point : polygon.points)
      out.push_back(json::array({point.lon, point.lat}));
    return out;
  }

  GeoPolygon geoPolygonFromJson(const json &value)
  {
    if (!value.is_array())
      mismatch(Datatype::GeoPolygon, value);

    GeoPolygon polygon;
    for (const auto &entry : value)
    {
      if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
          !entry[1].is_number())
        mismatch(Datatype::GeoPolygon, value);
      polygon.points.push_back({entry[0].get<double>(), entry[1].get<double>()});
    }
    return polygon;
  }

  json toJson(const TimeSeries &series)
  {
    json out = json::array();
    for (const auto &sample : series.samples)
      out.push_back({{"at", sample.at.toIso8601()}, {"value", sample.value}});
    return out;
  }

  TimeSeries timeSeriesFromJson(const json &value)
  {
    if (!value.is_array())
      mismatch(Datatype::Series, value);

    TimeSeries series;
    for (const auto &entry : value)
    {
      if (!entry.is_object() || !entry.contains("at") || !entry.contains("value"))
        mismatch(Datatype::Series, value);
      series.samples.push_back(
        {Timestamp::parse(entry.at("at").get<std::string>()), entry.at("value")});
    }
    return series;
  }

  json toJson(const TypedValue &value)
  {
    switch (datatypeOf(value))
    {
      case Datatype::Decimal:
        return std::get<double>(value);
      case Datatype::Integer:
        return std::get<std::int64_t>(value);
      case Datatype::Text:
        return std::get<std::string>(value);
      case Datatype::Boolean:
        return std::get<bool>(value);
      case Datatype::GeoPolygon:
        return toJson(std::get<GeoPolygon>(value));
      case Datatype::Series:
        return toJson(std::get<TimeSeries>(value));
    }
    return {};
  }

  TypedValue typedValueFromJson(const json &value, Datatype datatype)
  {
    switch (datatype)
    {
      case Datatype::Decimal:
        if (!value.is_number())
          mismatch(datatype, value);
        return value.get<double>();
      case Datatype::Integer:
        if (!value.is_number_integer())
          mismatch(datatype, value);
        return value.get<std::int64_t>();
      case Datatype::Text:
        if (!value.is_string())
          mismatch(datatype, value);
        return value.get<std::string>();
      case Datatype::Boolean:
        if (!value.is_boolean())
          mismatch(datatype, value);
        return value.get<bool>();
      case Datatype::GeoPolygon:
        return geoPolygonFromJson(value);
      case Datatype::Series:
        return timeSeriesFromJson(value);
    }
    mismatch(datatype, value);
  }

  json propertyViewToJson(const PropertyElement &element)
  {
    return {{"semanticId", element.semanticId.value},
            {"datatype", toString(element.datatype)},
            {"unit", element.unit},
            {"value", toJson(element.value)},
            {"lastUpdated", element.lastUpdated.toIso8601()}};
  }

  json toJson(const ParameterSpec &spec)
  {
    return {{"name", spec.name},
            {"datatype", toString(spec.datatype)},
            {"unit", spec.unit}};
  }

  ParameterSpec parameterSpecFromJson(const json &value)
  {
    return {value.at("name").get<std::string>(),
            datatypeFromString(value.at("datatype").get<std::string>()),
            value.value("unit", std::string())};
  }

  namespace
  {
    json parametersToJson(const std::vector<ParameterSpec> &params)
    {
      json out = json::array();
      for (const auto &param : params)
        out.push_back(toJson(param));
      return out;
    }

    std::vector<ParameterSpec> parametersFromJson(const json &value)
    {
      std::vector<ParameterSpec> params;
      for (const auto &entry : value)
        params.push_back(parameterSpecFromJson(entry));
      return params;
    }
  }  // namespace

  json toJson(const ShellDescriptor &descriptor)
  {
    json submodels = json::array();
    for (const auto &submodel : descriptor.submodels)
    {
      json elements = json::array();
      for (const auto &element : submodel.elements)
      {
        json entry = {{"shortName", element.shortName},
                      {"semanticId", element.semanticId.value}};
        if (element.kind == ElementKind::Property)
        {
          entry["kind"] = "property";
          entry["datatype"] = toString(element.datatype);
          entry["unit"] = element.unit;
        }
        else
        {
          entry["kind"] = "operation";
          entry["inputs"] = parametersToJson(element.inputs);
          entry["outputs"] = parametersToJson(element.outputs);
        }
        elements.push_back(std::move(entry));
      }
      submodels.push_back({{"shortName", submodel.shortName},
                           {"semanticId", submodel.semanticId.value},
                           {"elements", std::move(elements)}});
    }

    return {{"id", descriptor.id.value},
            {"kind", toString(descriptor.kind)},
            {"endpoint", descriptor.endpoint},
            {"submodels", std::move(submodels)},
            {"structureHash", descriptor.structureHash}};
  }

  ShellDescriptor shellDescriptorFromJson(const json &value)
  {
    ShellDescriptor descriptor;
    descriptor.id = TwinId(value.at("id").get<std::string>());
    descriptor.kind = twinKindFromString(value.at("kind").get<std::string>());
    descriptor.endpoint = value.value("endpoint", std::string());
    descriptor.structureHash = value.value("structureHash", std::string());

    for (const auto &submodelJson : value.at("submodels"))
    {
      SubmodelDigest submodel;
      submodel.shortName = submodelJson.at("shortName").get<std::string>();
      submodel.semanticId = SemanticId(submodelJson.at("semanticId").get<std::string>());
      for (const auto &elementJson : submodelJson.at("elements"))
      {
        ElementSignature element;
        element.shortName = elementJson.at("shortName").get<std::string>();
        element.semanticId = SemanticId(elementJson.at("semanticId").get<std::string>());
        if (elementJson.at("kind") == "property")
        {
          element.kind = ElementKind::Property;
          element.datatype = datatypeFromString(elementJson.at("datatype").get<std::string>());
          element.unit = elementJson.value("unit", std::string());
        }
        else
        {
          element.kind = ElementKind::Operation;
          element.inputs = parametersFromJson(elementJson.at("inputs"));
          element.outputs = parametersFromJson(elementJson.at("outputs"));
        }
        submodel.elements.push_back(std::move(element));
      }
      descriptor.submodels.push_back(std::move(submodel));
    }
    return descriptor;
  }

  json toJson(const TwinShell &shell)
  {
    json submodels = json::array();
    for (const auto &submodel : shell.submodels)
    {
      json elements = json::array();
      for (const auto &element : submodel.elements)
      {
        if (const auto *property = std::get_if<PropertyElement>(&element))
        {
          elements.push_back({{"kind", "property"},
                              {"shortName", property->shortName},
                              {"semanticId", property->semanticId.value},
                              {"datatype", toString(property->datatype)},
                              {"unit", property->unit},
                              {"value", toJson(property->value)},
                              {"lastUpdated", property->lastUpdated.toIso8601()}});
        }
        else
        {
          const auto &operation = std::get<OperationElement>(element);
          elements.push_back({{"kind", "operation"},
                              {"shortName", operation.shortName},
                              {"semanticId", operation.semanticId.value},
                              {"inputs", parametersToJson(operation.inputs)},
                              {"outputs", parametersToJson(operation.outputs)}});
        }
      }
      submodels.push_back({{"shortName", submodel.shortName},
                           {"semanticId", submodel.semanticId.value},
                           {"elements", std::move(elements)}});
    }

    return {{"id", shell.id.value},
            {"kind", toString(shell.kind)},
            {"submodels", std::move(submodels)}};
  }

  TwinShell twinShellFromJson(const json &value)
  {
    TwinShell shell;
    shell.id = TwinId(value.at("id").get<std::string>());
    shell.kind = twinKindFromString(value.at("kind").get<std::string>());

    for (const auto &submodelJson : value.at("submodels"))
    {
      Submodel submodel;
      submodel.shortName = submodelJson.at("shortName").get<std::string>();
      submodel.semanticId = SemanticId(submodelJson.at("semanticId").get<std::string>());
      for (const auto &elementJson : submodelJson.at("elements"))
      {
        if (elementJson.at("kind") == "property")
        {
          PropertyElement property;
          property.shortName = elementJson.at("shortName").get<std::string>();
          property.semanticId = SemanticId(elementJson.at("semanticId").get<std::string>());
          property.datatype = datatypeFromString(elementJson.at("datatype").get<std::string>());
          property.unit = elementJson.value("unit", std::string());
          property.value = typedValueFromJson(elementJson.at("value"), property.datatype);
          property.lastUpdated =
            Timestamp::parse(elementJson.at("lastUpdated").get<std::string>());
          submodel.elements.push_back(std::move(property));
        }
        else
        {
          OperationElement operation;
          operation.shortName = elementJson.at("shortName").get<std::string>();
          operation.semanticId = SemanticId(elementJson.at("semanticId").get<std::string>());
          operation.inputs = parametersFromJson(elementJson.at("inputs"));
          operation.outputs = parametersFromJson(elementJson.at("outputs"));
          submodel.elements.push_back(std::move(operation));
        }
      }
      shell.submodels.push_back(std::move(submodel));
    }
    return shell;
  }

  json toJson(const ArgMap &args, const std::vector<ParameterSpec> &signature)
  {
    json out = json::object();
    for (const auto &[name, value] : args)
      out[name] = toJson(value);
    (void)signature;
    return out;
  }

  ArgMap argMapFromJson(const json &value, const std::vector<ParameterSpec> &signature)
  {
    if (!value.is_object())
      throw Error(ErrorCode::SignatureMismatch, "arguments must be a JSON object");

    ArgMap args;
    for (const auto &[name, argJson] : value.items())
    {
      const ParameterSpec *spec = nullptr;
      for (const auto &candidate : signature)
        if (candidate.name == name)
          spec = &candidate;
      if (!spec)
        throw Error(ErrorCode::SignatureMismatch, "unexpected argument '" + name + "'");
      args[name] = typedValueFromJson(argJson, spec->datatype);
    }
    return args;
  }
}  // namespace agritwin
