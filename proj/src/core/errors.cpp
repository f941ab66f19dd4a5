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

#include "agritwin/core/errors.hpp"

#include <array>
#include <utility>

namespace agritwin
{
  namespace
  {
    constexpr std::array<std::pair<ErrorCode, const char *>, 28> kNames = {{
      {ErrorCode::InvalidArgument, "InvalidArgument"},
      {ErrorCode::DuplicateElementName, "DuplicateElementName"},
      {ErrorCode::UnresolvableSemanticId, "UnresolvableSemanticId"},
      {ErrorCode::PathNotFound, "PathNotFound"},
      {ErrorCode::DatatypeMismatch, "DatatypeMismatch"},
      {ErrorCode::UnitViolation, "UnitViolation"},
      {ErrorCode::SignatureMismatch, "SignatureMismatch"},
      {ErrorCode::DownstreamUnavailable, "DownstreamUnavailable"},
      {ErrorCode::MappingTargetMissing, "MappingTargetMissing"},
      {ErrorCode::DuplicateConcept, "DuplicateConcept"},
      {ErrorCode::NotFound, "NotFound"},
      {ErrorCode::DuplicateTwinId, "DuplicateTwinId"},
      {ErrorCode::TwinUnavailable, "TwinUnavailable"},
      {ErrorCode::TargetNotAboveCurrent, "TargetNotAboveCurrent"},
      {ErrorCode::UnsupportedTargetConcept, "UnsupportedTargetConcept"},
      {ErrorCode::AccessNotGranted, "AccessNotGranted"},
      {ErrorCode::ItemNotFoundOnSource, "ItemNotFoundOnSource"},
      {ErrorCode::ParseError, "ParseError"},
      {ErrorCode::DanglingRoleReference, "DanglingRoleReference"},
      {ErrorCode::NonconformantTwin, "NonconformantTwin"},
      {ErrorCode::UnboundRole, "UnboundRole"},
      {ErrorCode::StepArgumentError, "StepArgumentError"},
      {ErrorCode::NoRecipeForProcess, "NoRecipeForProcess"},
      {ErrorCode::TargetUnreachable, "TargetUnreachable"},
      {ErrorCode::ScenarioUnknown, "ScenarioUnknown"},
      {ErrorCode::UnknownSystem, "UnknownSystem"},
      {ErrorCode::PortInUse, "PortInUse"},
      {ErrorCode::BadConfig, "BadConfig"},
    }};
  }  // namespace

  const char *toString(ErrorCode code)
  {
    for (const auto &[value, name] : kNames)
      if (value == code)
        return name;
    return "InvalidArgument";
  }

  ErrorCode errorCodeFromString(const std::string &name)
  {
    for (const auto &[value, candidate] : kNames)
      if (name == candidate)
        return value;
    return ErrorCode::InvalidArgument;
  }
}  // namespace agritwin
