// Copyright 2026 The lmtkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lmt {

enum class ErrorCode {
  kDuplicateLanguage,
  kMissingCenter,
  kUnknownLanguage,
  kParseError,
  kInvalidRecord,
  kEmptySource,
  kNoAuxiliaryDefined,
  kMissingScore,
  kInvalidScore,
  kDuplicateRecord,
  kBackendFailure,
  kSynthesisAborted,
  kProtocolError,
  kIoError,
  kInvalidArgument,
};

/// Stable name used in machine-readable error lines ("UnknownLanguage", ...).
std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. Data errors carry the 1-based input
/// line when they come from a line-delimited reader.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<std::size_t> line = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<std::size_t>& line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

  /// One-line JSON object: {"error":..., "message":..., "line":...}.
  std::string to_json_line() const;

 private:
  ErrorCode code_;
  std::optional<std::size_t> line_;
  std::string detail_;
};

}  // namespace lmt
