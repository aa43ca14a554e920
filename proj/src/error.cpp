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

#include "lmtkit/error.hpp"

#include <json.hpp>

namespace lmt {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateLanguage: return "DuplicateLanguage";
    case ErrorCode::kMissingCenter: return "MissingCenter";
    case ErrorCode::kUnknownLanguage: return "UnknownLanguage";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidRecord: return "InvalidRecord";
    case ErrorCode::kEmptySource: return "EmptySource";
    case ErrorCode::kNoAuxiliaryDefined: return "NoAuxiliaryDefined";
    case ErrorCode::kMissingScore: return "MissingScore";
    case ErrorCode::kInvalidScore: return "InvalidScore";
    case ErrorCode::kDuplicateRecord: return "DuplicateRecord";
    case ErrorCode::kBackendFailure: return "BackendFailure";
    case ErrorCode::kSynthesisAborted: return "SynthesisAborted";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::optional<std::size_t>& line) {
  std::string out(to_string(code));
  if (line) out += " at line " + std::to_string(*line);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(compose(code, message, line)),
      code_(code),
      line_(line),
      detail_(message) {}

std::string Error::to_json_line() const {
  nlohmann::ordered_json j;
  j["error"] = std::string(to_string(code_));
  j["message"] = detail_;
  if (line_) j["line"] = *line_;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace lmt
