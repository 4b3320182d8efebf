// Copyright 2026 The stb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stb {

/// Failure categories shared by every module. The CLI reports the name of the
/// code, so the spelling of `error_name` is part of the report format.
enum class ErrorCode {
  NonPrimeModulus,
  FieldMismatch,
  ShapeMismatch,
  BadPrime,
  DuplicatePoints,
  DependentBasis,
  ZeroSection,
  BadClass,
  HasBasepoint,
  UnsupportedLabel,
  UnsupportedScene,
  ZeroEvaluation,
  NonUniqueQuotient,
  WindowTooSmall,
  BadTuple,
  NotGeneralPosition,
  HypothesisFailed,
  ClassMismatch,
  ZeroScale,
  InvalidPresentation,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::BadPrime: return "BadPrime";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::DependentBasis: return "DependentBasis";
    case ErrorCode::ZeroSection: return "ZeroSection";
    case ErrorCode::BadClass: return "BadClass";
    case ErrorCode::HasBasepoint: return "HasBasepoint";
    case ErrorCode::UnsupportedLabel: return "UnsupportedLabel";
    case ErrorCode::UnsupportedScene: return "UnsupportedScene";
    case ErrorCode::ZeroEvaluation: return "ZeroEvaluation";
    case ErrorCode::NonUniqueQuotient: return "NonUniqueQuotient";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::BadTuple: return "BadTuple";
    case ErrorCode::NotGeneralPosition: return "NotGeneralPosition";
    case ErrorCode::HypothesisFailed: return "HypothesisFailed";
    case ErrorCode::ClassMismatch: return "ClassMismatch";
    case ErrorCode::ZeroScale: return "ZeroScale";
    case ErrorCode::InvalidPresentation: return "InvalidPresentation";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace stb
