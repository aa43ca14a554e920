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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmtkit/language.hpp"

namespace lmt {

/// Counts per tier, indexed by Tier.
struct TierCounts {
  std::size_t high = 0;
  std::size_t medium = 0;
  std::size_t low = 0;

  std::size_t total() const { return high + medium + low; }
  std::size_t& operator[](Tier t);
  std::size_t operator[](Tier t) const;
  friend bool operator==(const TierCounts&, const TierCounts&) = default;
};

/// Non-center language code -> auxiliary language code used for PMP on
/// En-centric directions.
using AuxiliaryMap = std::map<std::string, std::string>;

/// Immutable set of languages plus the auxiliary mapping. Safe for shared
/// concurrent reads once constructed.
class Registry {
 public:
  /// The 60-language table with its 19 auxiliary assignments.
  static const Registry& builtin();

  /// Validates and builds a registry. Throws DuplicateLanguage,
  /// MissingCenter, UnknownLanguage (auxiliary naming an absent language) or
  /// InvalidRecord (bad code, auxiliary entry involving a center).
  static Registry from_languages(std::vector<Language> languages,
                                 AuxiliaryMap auxiliaries);

  /// Reads a line-delimited JSON language table
  /// ({"code","name","script","family","tier"} per line) and an optional
  /// auxiliary table ({"lang","aux"} per line). Without an auxiliary stream
  /// the built-in assignments are kept for every pair present in the table.
  static Registry load(std::istream& languages, std::istream* auxiliaries);

  const std::vector<Language>& languages() const { return languages_; }
  const AuxiliaryMap& auxiliaries() const { return auxiliaries_; }
  std::size_t size() const { return languages_.size(); }

  bool contains(std::string_view code) const;
  /// Throws UnknownLanguage.
  const Language& at(std::string_view code) const;
  Tier tier_of(std::string_view code) const { return at(code).tier; }
  TierCounts tier_counts() const;

  /// Auxiliary language for PMP on a centric direction, or nullopt when the
  /// direction falls back to the standard prompt. En<->X uses the table,
  /// Zh<->X (X != en) always uses en, en<->zh has none. Throws
  /// InvalidArgument for non-centric directions and UnknownLanguage for codes
  /// outside the registry.
  std::optional<std::string> auxiliary_for(const Direction& direction) const;

 private:
  Registry() = default;

  std::vector<Language> languages_;
  std::unordered_map<std::string, std::size_t> index_;
  AuxiliaryMap auxiliaries_;
};

/// "builtin" (or empty) selects Registry::builtin(); anything else is a path to
/// a language table. `aux_path` optionally names an auxiliary table.
Registry load_registry(const std::string& path,
                       const std::optional<std::string>& aux_path = std::nullopt);

/// Free-function form of Registry::tier_of.
inline Tier tier_of(const Registry& registry, std::string_view code) {
  return registry.tier_of(code);
}

inline std::optional<std::string> auxiliary_for(const Registry& registry,
                                                const Direction& direction) {
  return registry.auxiliary_for(direction);
}

}  // namespace lmt
