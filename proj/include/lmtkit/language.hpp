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

#include <compare>
#include <string>
#include <string_view>

namespace lmt {

inline constexpr std::string_view kEnglish = "en";
inline constexpr std::string_view kChinese = "zh";

enum class Tier { kHigh, kMedium, kLow };

std::string_view to_string(Tier tier);
/// Accepts "High", "Medium"/"Mid", "Low" (case-insensitive).
Tier parse_tier(std::string_view text);

struct Language {
  std::string code;
  std::string name;
  std::string script;
  std::string family;
  Tier tier = Tier::kLow;

  friend bool operator==(const Language&, const Language&) = default;
};

inline bool is_center(std::string_view code) {
  return code == kEnglish || code == kChinese;
}

/// Codes are lowercase ASCII letters with optional '_' separators
/// ("en", "mn_cn"). Digits are excluded so "<src>2<tgt>" keys stay parseable.
bool is_valid_code(std::string_view code);

/// A translation direction. Every direction the toolkit handles has a center
/// language (en or zh) on at least one side; see is_centric().
struct Direction {
  std::string src;
  std::string tgt;

  /// "<src>2<tgt>", used as the example-id suffix.
  std::string key() const { return src + "2" + tgt; }
  Direction reversed() const { return {tgt, src}; }
  bool is_centric() const {
    return src != tgt && (is_center(src) || is_center(tgt));
  }

  friend auto operator<=>(const Direction&, const Direction&) = default;
};

/// Inverse of Direction::key(). Throws InvalidArgument on malformed keys.
Direction parse_direction(std::string_view key);

}  // namespace lmt
