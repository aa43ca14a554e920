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
#include <string>
#include <string_view>

namespace lmt::text {

/// Unicode NFC. Malformed UTF-8 is passed through ICU, which substitutes
/// U+FFFD; inputs read through the JSON readers are already valid.
std::string nfc(std::string_view utf8);

/// Number of code points (bytes that are not UTF-8 continuation bytes).
std::size_t codepoint_count(std::string_view utf8);

/// Number of maximal runs of non-whitespace (ASCII whitespace).
std::size_t whitespace_token_count(std::string_view s);

/// True when the text contains a C0 control character other than \t and \n.
bool has_c0_control(std::string_view s);

/// Languages written without spaces between words (zh, ja, th, my, km, lo,
/// bo, yue); their length is measured in code points.
bool is_scriptio_continua(std::string_view lang);

}  // namespace lmt::text
