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

#include <memory>

#include "agritwin/vocab/vocabulary.hpp"

namespace agritwin::vocab
{
  /// The agrivoc concept set every participant agrees on. The shipped seed
  /// file fixtures/vocabulary.json carries the same content.
  nlohmann::json agrivocSeed();
  std::shared_ptr<Vocabulary> agrivoc();
}  // namespace agritwin::vocab
