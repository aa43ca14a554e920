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

#include "lmtkit/text.hpp"

#include <array>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "lmtkit/error.hpp"

namespace lmt::text {

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kIoError, "ICU NFC normalizer unavailable");
  }
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (source.isBogus()) throw Error(ErrorCode::kInvalidRecord, "malformed UTF-8");
  if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) {
    return std::string(utf8);
  }
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = normalizer->normalize(source, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::kInvalidRecord, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::size_t codepoint_count(std::string_view utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::size_t whitespace_token_count(std::string_view s) {
  std::size_t n = 0;
  bool in_token = false;
  for (char c : s) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

bool has_c0_control(std::string_view s) {
  for (unsigned char c : s) {
    if (c < 0x20 && c != '\t' && c != '\n') return true;
  }
  return false;
}

bool is_scriptio_continua(std::string_view lang) {
  static constexpr std::array<std::string_view, 8> kLangs = {"zh", "ja", "th", "my",
                                                             "km", "lo", "bo", "yue"};
  for (auto l : kLangs) {
    if (l == lang) return true;
  }
  return false;
}

}  // namespace lmt::text
