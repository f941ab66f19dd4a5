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

#include "agritwin/sim/recipes.hpp"

#include <json.hpp>

namespace agritwin::sim
{
  std::string weedControlPotatoRecipe()
  {
    return R"recipe({
  "name": "weed-control-potato",
  "cropType": "potato",
  "roles": [
    { "name": "routePlanner", "requires": ["urn:agrivoc:sm.planning"] },
    { "name": "fieldRobot", "requires": ["urn:agrivoc:sm.weedwork"] },
    { "name": "field", "requires": ["urn:agrivoc:sm.geographic", "urn:agrivoc:sm.agronomic"] }
  ],
  "steps": [
    {
      "role": "routePlanner",
      "op": "planning/planRoute",
      "args": {
        "boundaries": { "read": { "role": "field", "semanticId": "urn:agrivoc:field.boundaries" } },
        "crop": { "lit": "potato" }
      }
    },
    {
      "role": "fieldRobot",
      "op": "weedwork/executeJob",
      "args": {
        "route": { "step": 0, "output": "route" },
        "cropType": { "lit": "potato" },
        "fieldId": { "roleId": "field" }
      }
    },
    {
      "role": "field",
      "op": "agronomic/recordWork",
      "args": {
        "record": { "step": 1, "output": "record" }
      }
    }
  ]
}
)recipe";
  }

  std::string weedControlSugarBeetRecipe()
  {
    return R"recipe({
  "name": "weed-control-sugar-beet",
  "cropType": "sugar beet",
  "roles": [
    { "name": "routePlanner", "requires": ["urn:agrivoc:sm.planning"] },
    { "name": "fieldRobot", "requires": ["urn:agrivoc:sm.weedwork"] },
    { "name": "field", "requires": ["urn:agrivoc:sm.geographic", "urn:agrivoc:sm.agronomic"] }
  ],
  "steps": [
    {
      "role": "routePlanner",
      "op": "planning/planRoute",
      "args": {
        "boundaries": { "read": { "role": "field", "semanticId": "urn:agrivoc:field.boundaries" } },
        "crop": { "lit": "sugar beet" }
      }
    },
    {
      "role": "fieldRobot",
      "op": "weedwork/executeJob",
      "args": {
        "route": { "step": 0, "output": "route" },
        "cropType": { "lit": "sugar beet" },
        "fieldId": { "roleId": "field" }
      }
    },
    {
      "role": "field",
      "op": "agronomic/recordWork",
      "args": {
        "record": { "step": 1, "output": "record" }
      }
    }
  ]
}
)recipe";
  }

  std::string fertilizationRecipe()
  {
    return R"recipe({
  "name": "fertilization",
  "cropType": "",
  "roles": [
    { "name": "spreader", "requires": ["urn:agrivoc:sm.fertilizerwork"] },
    { "name": "field", "requires": ["urn:agrivoc:sm.agronomic"] }
  ],
  "steps": [
    {
      "role": "spreader",
      "op": "fertilizerwork/applyFertilizer",
      "args": {
        "fieldId": { "roleId": "field" },
        "amountKgHa": { "lit": 10.0 }
      }
    },
    {
      "role": "field",
      "op": "agronomic/recordWork",
      "args": {
        "record": { "step": 0, "output": "record" }
      }
    }
  ]
}
)recipe";
  }

  std::string fertilizationRecipeWithAmount(double amountKgHa)
  {
    nlohmann::json definition = nlohmann::json::parse(fertilizationRecipe());
    definition["steps"][0]["args"]["amountKgHa"]["lit"] = amountKgHa;
    return definition.dump(2) + "\n";
  }
}  // namespace agritwin::sim
