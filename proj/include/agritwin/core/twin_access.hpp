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
#include <shared_mutex>
#include <string>
#include <vector>

#include "agritwin/core/shell.hpp"

namespace agritwin
{
  /// Reflective access to a twin, local or remote. This is the only interface
  /// the mediator and the orchestrator ever program against.
  class TwinAccess
  {
  public:
    virtual ~TwinAccess() = default;

    virtual ShellDescriptor describe() = 0;
    virtual PropertyElement readProperty(const std::string &path) = 0;
    virtual bool writeProperty(const std::string &path, const TypedValue &value,
                               Timestamp at) = 0;
    virtual ArgMap invokeOperation(const std::string &path, const ArgMap &args) = 0;

    /// Accepts mediator-delivered data into the "inbox" submodel, creating the
    /// element keyed by semantic id on first delivery.
    virtual void deliverToInbox(const SemanticId &semanticId, Datatype datatype,
                                const std::string &unit, const TypedValue &value,
                                Timestamp at) = 0;

    /// Appends one sample to a Series property. Returns false when the sample
    /// timestamp precedes the last appended one.
    virtual bool appendToSeries(const std::string &path, const SeriesSample &sample) = 0;
  };

  /// Paths carrying the semantic id, resolved purely through describe().
  std::vector<std::string> resolveBySemanticId(TwinAccess &twin, const SemanticId &id);

  /// Snapshot of every property on the twin, keyed by path. Reflection only.
  std::map<std::string, PropertyElement> snapshotProperties(TwinAccess &twin);

  struct WriteEvent
  {
    enum class Kind
    {
      Property,
      Inbox,
      SeriesAppend
    };

    Kind kind = Kind::Property;
    TwinId twin;
    std::string path;
    PropertyElement element;  // state after the write
    SeriesSample sample;      // SeriesAppend only
  };

  /// In-memory twin: shell state under a readers-writer lock plus bound
  /// operation implementations. Handlers run outside the state lock so they
  /// may call back into the twin.
  class LocalTwin : public TwinAccess
  {
  public:
    using OperationHandler = std::function<ArgMap(const ArgMap &)>;
    using WriteObserver = std::function<void(const WriteEvent &)>;
    using WriteValidator =
      std::function<void(const std::string &path, const TypedValue &value)>;

    explicit LocalTwin(TwinShell shell);

    const TwinId &id() const { return m_shell.id; }

    ShellDescriptor describe() override;
    PropertyElement readProperty(const std::string &path) override;
    bool writeProperty(const std::string &path, const TypedValue &value,
                       Timestamp at) override;
    ArgMap invokeOperation(const std::string &path, const ArgMap &args) override;
    void deliverToInbox(const SemanticId &semanticId, Datatype datatype,
                        const std::string &unit, const TypedValue &value,
                        Timestamp at) override;
    bool appendToSeries(const std::string &path, const SeriesSample &sample) override;

    void bindOperation(const std::string &path, OperationHandler handler);
    void setWriteObserver(WriteObserver observer);

    /// Domain validation hook, e.g. range constraints. Runs before a write is
    /// accepted; throws to reject.
    void addWriteValidator(WriteValidator validator);

    std::map<std::string, PropertyElement> snapshot() const;

    /// Copy of the current shell state, e.g. for persistence replay.
    TwinShell shellCopy() const;

  private:
    const PropertyElement &propertyLocked(const std::string &path) const;
    void notify(const WriteEvent &event);

    mutable std::shared_mutex m_mutex;
    TwinShell m_shell;
    std::map<std::string, OperationHandler> m_handlers;
    std::vector<WriteValidator> m_validators;
    WriteObserver m_observer;
  };

  /// Short name used for inbox elements: the semantic id with every character
  /// outside [A-Za-z0-9] replaced by '_'.
  std::string inboxShortName(const SemanticId &id);

  inline constexpr const char *kInboxSubmodel = "inbox";
  inline constexpr const char *kInboxSemanticId = "urn:agrivoc:sm.inbox";
}  // namespace agritwin
