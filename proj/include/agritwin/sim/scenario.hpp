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

#include <string>
#include <vector>

#include "agritwin/sim/world.hpp"

namespace agritwin::sim
{
  struct ClauseResult
  {
    std::string clause;
    std::string expected;
    std::string observed;
    bool pass = false;
  };

  /// Per-clause evidence for one scenario run. Reports contain simulated
  /// time only, so equal seeds yield byte-identical JSON.
  struct ScenarioReport
  {
    std::string name;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> cast;
    bool pass = false;
    std::vector<ClauseResult> clauses;
  };

  nlohmann::json toJson(const ScenarioReport &report);

  /// Runs the scenario the world was built for against a started world.
  /// Throws Error{ScenarioUnknown}.
  ScenarioReport runScenario(World &world);
}  // namespace agritwin::sim
