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

#include "agritwin/hub/persistence.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include "agritwin/core/errors.hpp"
#include "agritwin/core/json_codec.hpp"

namespace agritwin::hub
{
  namespace fs = std::filesystem;

  TwinLog::TwinLog(std::string filePath) : m_path(std::move(filePath))
  {
    fs::create_directories(fs::path(m_path).parent_path());
  }

  void TwinLog::writeModel(const TwinShell &shell)
  {
    std::lock_guard lock(m_mutex);
    std::ofstream out(m_path, std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::BadConfig, "cannot write twin log '" + m_path + "'");
    out << json{{"op", "model"}, {"shell", toJson(shell)}}.dump() << '\n';
  }

  void TwinLog::append(const WriteEvent &event)
  {
    json line;
    switch (event.kind)
    {
      case WriteEvent::Kind::Property:
        line = {{"op", "write"},
                {"path", event.path},
                {"datatype", toString(event.element.datatype)},
                {"value", toJson(event.element.value)},
                {"at", event.element.lastUpdated.toIso8601()}};
        break;
      case WriteEvent::Kind::Inbox:
        line = {{"op", "inbox"},
                {"semanticId", event.element.semanticId.value},
                {"datatype", toString(event.element.datatype)},
                {"unit", event.element.unit},
                {"value", toJson(event.element.value)},
                {"at", event.element.lastUpdated.toIso8601()}};
        break;
      case WriteEvent::Kind::SeriesAppend:
        line = {{"op", "append"},
                {"path", event.path},
                {"at", event.sample.at.toIso8601()},
                {"value", event.sample.value}};
        break;
    }

    std::lock_guard lock(m_mutex);
    std::ofstream out(m_path, std::ios::app);
    if (!out)
      throw Error(ErrorCode::BadConfig, "cannot append to twin log '" + m_path + "'");
    out << line.dump() << '\n';
  }

  std::optional<TwinShell> TwinLog::replay(const std::string &filePath)
  {
    std::ifstream in(filePath);
    if (!in)
      return std::nullopt;

    std::string lineText;
    std::optional<LocalTwin> twin;
    while (std::getline(in, lineText))
    {
      if (lineText.empty())
        continue;
      json line = json::parse(lineText);
      std::string op = line.at("op").get<std::string>();

      if (op == "model")
      {
        twin.emplace(twinShellFromJson(line.at("shell")));
      }
      else if (!twin)
      {
        throw Error(ErrorCode::ParseError,
                    "twin log '" + filePath + "' does not start with a model line");
      }
      else if (op == "write")
      {
        Datatype datatype = datatypeFromString(line.at("datatype").get<std::string>());
        twin->writeProperty(line.at("path").get<std::string>(),
                            typedValueFromJson(line.at("value"), datatype),
                            Timestamp::parse(line.at("at").get<std::string>()));
      }
      else if (op == "inbox")
      {
        Datatype datatype = datatypeFromString(line.at("datatype").get<std::string>());
        twin->deliverToInbox(SemanticId(line.at("semanticId").get<std::string>()),
                             datatype, line.value("unit", std::string()),
                             typedValueFromJson(line.at("value"), datatype),
                             Timestamp::parse(line.at("at").get<std::string>()));
      }
      else if (op == "append")
      {
        twin->appendToSeries(line.at("path").get<std::string>(),
                             {Timestamp::parse(line.at("at").get<std::string>()),
                              line.at("value")});
      }
      else
      {
        throw Error(ErrorCode::ParseError, "unknown log op '" + op + "'");
      }
    }

    if (!twin)
      return std::nullopt;
    return twin->shellCopy();
  }

  std::string TwinLog::fileFor(const std::string &dataDir, const TwinId &id)
  {
    std::string name = id.value;
    for (char &c : name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_')
        c = '_';
    return (fs::path(dataDir) / "twins" / (name + ".jsonl")).string();
  }

  std::vector<std::string> TwinLog::listLogs(const std::string &dataDir)
  {
    std::vector<std::string> out;
    fs::path dir = fs::path(dataDir) / "twins";
    if (!fs::exists(dir))
      return out;
    for (const auto &entry : fs::directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
        out.push_back(entry.path().string());
    std::sort(out.begin(), out.end());
    return out;
  }
}  // namespace agritwin::hub
