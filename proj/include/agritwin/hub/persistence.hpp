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

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "agritwin/core/twin_access.hpp"

namespace agritwin::hub
{
  /// Append-only snapshot file for one hosted twin: the first line is the
  /// full shell model, every further line one accepted mutation. Replaying
  /// the file rebuilds the exact twin state.
  class TwinLog
  {
  public:
    explicit TwinLog(std::string filePath);

    const std::string &path() const { return m_path; }

    /// Starts a fresh log with the given model as line one.
    void writeModel(const TwinShell &shell);

    void append(const WriteEvent &event);

    /// Rebuilds the twin state; std::nullopt when the file is absent.
    static std::optional<TwinShell> replay(const std::string &filePath);

    static std::string fileFor(const std::string &dataDir, const TwinId &id);
    static std::vector<std::string> listLogs(const std::string &dataDir);

  private:
    std::string m_path;
    std::mutex m_mutex;
  };
}  // namespace agritwin::hub
