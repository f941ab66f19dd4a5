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

namespace agritwin::sim
{
  // Canonical recipe definition bytes. The files under recipes/ ship the
  // exact same content; a test pins the equality.
  std::string weedControlPotatoRecipe();
  std::string weedControlSugarBeetRecipe();

  /// The shipped fertilization recipe applies 10 kg/ha per pass.
  std::string fertilizationRecipe();

  /// Same recipe with a different per-pass amount, for configured worlds.
  std::string fertilizationRecipeWithAmount(double amountKgHa);
}  // namespace agritwin::sim
