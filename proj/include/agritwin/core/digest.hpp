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

#include <cstdint>
#include <string>
#include <string_view>

namespace agritwin
{
  /// FNV-1a over the raw bytes. Content fingerprinting only, not cryptographic.
  std::uint64_t fnv1a64(std::string_view bytes);

  /// 16-hex-digit rendering of fnv1a64(bytes).
  std::string hexDigest(std::string_view bytes);
}  // namespace agritwin
