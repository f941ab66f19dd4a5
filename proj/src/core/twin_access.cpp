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

#include "agritwin/core/twin_access.hpp"

#include <cctype>
#include <mutex>

#include "agritwin/core/errors.hpp"

namespace agritwin
{
  std::vector<std::string> resolveBySemanticId(TwinAccess &twin, const SemanticId &id)
  {
    return resolveBySemanticId(twin.describe(), id);
  }

  std::map<std::string, PropertyElement> snapshotProperties(TwinAccess &twin)
  {
    std::map<std::string, PropertyElement> snapshot;
    ShellDescriptor descriptor = twin.describe();
    for (const auto &submodel : descriptor.submodels)
    {
      for (const auto &element : submodel.elements)
      {
        if (element.kind != ElementKind::Property)
          continue;
        std::string path = joinPath(submodel.shortName, element.shortName);
        snapshot.emplace(path, twin.readProperty(path));
      }
    }
    return snapshot;
  }

  std::string inboxShortName(const SemanticId &id)
  {
    std::string name = id.value;
    for (char &c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)))
        c = '_';
    return name;
  }

  LocalTwin::LocalTwin(TwinShell shell) : m_shell(std::move(shell)) {}

  ShellDescriptor LocalTwin::describe()
  {
    std::shared_lock lock(m_mutex);
    return agritwin::describe(m_shell);
  }

  PropertyElement LocalTwin::readProperty(const std::string &path)
  {
    std::shared_lock lock(m_mutex);
    return getProperty(m_shell, path);
  }

  bool LocalTwin::writeProperty(const std::string &path, const TypedValue &value,
                                Timestamp at)
  {
    WriteEvent event;
    {
      std::unique_lock lock(m_mutex);
      // Surface PathNotFound/DatatypeMismatch before domain validation.
      const PropertyElement &current = getProperty(m_shell, path);
      if (datatypeOf(value) != current.datatype)
        throw Error(ErrorCode::DatatypeMismatch,
                    "property '" + path + "' expects " + toString(current.datatype) +
                      ", got " + toString(datatypeOf(value)));

      for (const auto &validator : m_validators)
        validator(path, value);

      if (!setProperty(m_shell, path, value, at))
        return false;

      event.kind = WriteEvent::Kind::Property;
      event.twin = m_shell.id;
      event.path = path;
      event.element = getProperty(m_shell, path);
    }
    notify(event);
    return true;
  }

  ArgMap LocalTwin::invokeOperation(const std::string &path, const ArgMap &args)
  {
    OperationElement operation;
    OperationHandler handler;
    {
      std::shared_lock lock(m_mutex);
      operation = getOperation(m_shell, path);
      auto it = m_handlers.find(path);
      if (it != m_handlers.end())
        handler = it->second;
    }

    for (const auto &[name, value] : args)
    {
      const ParameterSpec *spec = nullptr;
      for (const auto &input : operation.inputs)
        if (input.name == name)
          spec = &input;
      if (!spec)
        throw Error(ErrorCode::SignatureMismatch,
                    "operation '" + path + "' has no input '" + name + "'");
      if (datatypeOf(value) != spec->datatype)
        throw Error(ErrorCode::SignatureMismatch,
                    "input '" + name + "' of '" + path + "' expects " +
                      toString(spec->datatype));
    }
    for (const auto &input : operation.inputs)
      if (!args.count(input.name))
        throw Error(ErrorCode::SignatureMismatch,
                    "operation '" + path + "' missing input '" + input.name + "'");

    if (!handler)
      throw Error(ErrorCode::DownstreamUnavailable,
                  "operation '" + path + "' has no bound implementation");

    // Handlers run unlocked so they may read or write this twin.
    ArgMap outputs = handler(args);

    for (const auto &output : operation.outputs)
    {
      auto it = outputs.find(output.name);
      if (it == outputs.end())
        throw Error(ErrorCode::SignatureMismatch,
                    "operation '" + path + "' did not produce output '" + output.name +
                      "'");
      if (datatypeOf(it->second) != output.datatype)
        throw Error(ErrorCode::SignatureMismatch,
                    "output '" + output.name + "' of '" + path + "' expects " +
                      toString(output.datatype));
    }
    return outputs;
  }

  void LocalTwin::deliverToInbox(const SemanticId &semanticId, Datatype datatype,
                                 const std::string &unit, const TypedValue &value,
                                 Timestamp at)
  {
    if (datatypeOf(value) != datatype)
      throw Error(ErrorCode::DatatypeMismatch,
                  "inbox delivery for '" + semanticId.value + "' carries " +
                    toString(datatypeOf(value)) + ", declared " + toString(datatype));

    WriteEvent event;
    {
      std::unique_lock lock(m_mutex);

      Submodel *inbox = nullptr;
      for (auto &submodel : m_shell.submodels)
        if (submodel.shortName == kInboxSubmodel)
          inbox = &submodel;
      if (!inbox)
      {
        m_shell.submodels.push_back(
          {kInboxSubmodel, SemanticId(kInboxSemanticId), {}});
        inbox = &m_shell.submodels.back();
      }

      std::string shortName = inboxShortName(semanticId);
      PropertyElement *slot = nullptr;
      for (auto &element : inbox->elements)
        if (auto *property = std::get_if<PropertyElement>(&element))
          if (property->shortName == shortName)
            slot = property;

      if (!slot)
      {
        inbox->elements.push_back(
          PropertyElement{shortName, semanticId, datatype, unit, value, at});
        slot = &std::get<PropertyElement>(inbox->elements.back());
      }
      else
      {
        if (at < slot->lastUpdated)
          return;  // stale delivery
        slot->datatype = datatype;
        slot->unit = unit;
        slot->value = value;
        slot->lastUpdated = at;
      }

      event.kind = WriteEvent::Kind::Inbox;
      event.twin = m_shell.id;
      event.path = joinPath(kInboxSubmodel, shortName);
      event.element = *slot;
    }
    notify(event);
  }

  bool LocalTwin::appendToSeries(const std::string &path, const SeriesSample &sample)
  {
    WriteEvent event;
    {
      std::unique_lock lock(m_mutex);
      auto [submodelName, elementName] = splitPath(path);

      PropertyElement *series = nullptr;
      for (auto &submodel : m_shell.submodels)
      {
        if (submodel.shortName != submodelName)
          continue;
        for (auto &element : submodel.elements)
          if (auto *property = std::get_if<PropertyElement>(&element))
            if (property->shortName == elementName)
              series = property;
      }
      if (!series)
        throw Error(ErrorCode::PathNotFound, "no property at '" + path + "'");
      if (series->datatype != Datatype::Series)
        throw Error(ErrorCode::DatatypeMismatch,
                    "property '" + path + "' is not a series");

      auto &samples = std::get<TimeSeries>(series->value).samples;
      if (!samples.empty() && sample.at < samples.back().at)
        return false;  // keeps the series chronologically ordered

      samples.push_back(sample);
      series->lastUpdated = sample.at;

      event.kind = WriteEvent::Kind::SeriesAppend;
      event.twin = m_shell.id;
      event.path = path;
      event.element = *series;
      event.sample = sample;
    }
    notify(event);
    return true;
  }

  void LocalTwin::bindOperation(const std::string &path, OperationHandler handler)
  {
    std::unique_lock lock(m_mutex);
    getOperation(m_shell, path);  // must exist
    m_handlers[path] = std::move(handler);
  }

  void LocalTwin::setWriteObserver(WriteObserver observer)
  {
    std::unique_lock lock(m_mutex);
    m_observer = std::move(observer);
  }

  void LocalTwin::addWriteValidator(WriteValidator validator)
  {
    std::unique_lock lock(m_mutex);
    m_validators.push_back(std::move(validator));
  }

  std::map<std::string, PropertyElement> LocalTwin::snapshot() const
  {
    std::shared_lock lock(m_mutex);
    std::map<std::string, PropertyElement> out;
    for (const auto &submodel : m_shell.submodels)
      for (const auto &element : submodel.elements)
        if (const auto *property = std::get_if<PropertyElement>(&element))
          out.emplace(joinPath(submodel.shortName, property->shortName), *property);
    return out;
  }

  TwinShell LocalTwin::shellCopy() const
  {
    std::shared_lock lock(m_mutex);
    return m_shell;
  }

  void LocalTwin::notify(const WriteEvent &event)
  {
    WriteObserver observer;
    {
      std::shared_lock lock(m_mutex);
      observer = m_observer;
    }
    if (observer)
      observer(event);
  }
}  // namespace agritwin
