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

#include <stdexcept>
#include <string>

namespace agritwin
{
  enum class ErrorCode
  {
    InvalidArgument,
    DuplicateElementName,
    UnresolvableSemanticId,
    PathNotFound,
    DatatypeMismatch,
    UnitViolation,
    SignatureMismatch,
    DownstreamUnavailable,
    MappingTargetMissing,
    DuplicateConcept,
    NotFound,
    DuplicateTwinId,
    TwinUnavailable,
    TargetNotAboveCurrent,
    UnsupportedTargetConcept,
    AccessNotGranted,
    ItemNotFoundOnSource,
    ParseError,
    DanglingRoleReference,
    NonconformantTwin,
    UnboundRole,
    StepArgumentError,
    NoRecipeForProcess,
    TargetUnreachable,
    ScenarioUnknown,
    UnknownSystem,
    PortInUse,
    BadConfig
  };

  const char *toString(ErrorCode code);

  /// Parses a wire-level error code name; unknown names map to InvalidArgument.
  ErrorCode errorCodeFromString(const std::string &name);

  class Error : public std::runtime_error
  {
  public:
    Error(ErrorCode code, const std::string &message)
      : std::runtime_error(std::string(toString(code)) + ": " + message), m_code(code),
        m_detail(message)
    {
    }

    ErrorCode code() const { return m_code; }
    const std::string &detail() const { return m_detail; }

  private:
    ErrorCode m_code;
    std::string m_detail;
  };
}  // namespace agritwin
