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

#include "agritwin/core/digest.hpp"

#include <cstdio>

namespace agritwin
{
  std::uint64_t fnv1a64(std::string_view bytes)
  {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char byte : bytes)
    {
      hash ^= byte;
      hash *= 1099511628211ULL;
    }
    return hash;
  }

  std::string hexDigest(std::string_view bytes)
  {
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buffer;
  }
}  // namespace agritwin
