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
#include <string>
#include <unordered_map>
#include <vector>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/language.hpp"

namespace lmt {

class Registry;

/// The center-involving direction space of a registry.
class DirectionSet {
 public:
  DirectionSet() = default;
  explicit DirectionSet(std::vector<Direction> directions);

  const std::vector<Direction>& directions() const { return directions_; }
  std::size_t direction_count() const { return directions_.size(); }
  /// Unordered language pairs; always direction_count() / 2.
  std::size_t pair_count() const { return directions_.size() / 2; }

  bool contains(const Direction& d) const { return index_.count(d.key()) != 0; }
  std::optional<std::size_t> index_of(const Direction& d) const;

 private:
  std::vector<Direction> directions_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// En<->X for every X != en, then Zh<->X for every X outside {en, zh}, in
/// registry order. en<->zh is listed once, in the English block. The
/// built-in registry yields 117 pairs / 234 directions.
DirectionSet enumerate_directions(const Registry& registry);

/// One human-provenance example per direction of `dirset` whose two languages
/// both occur in the record, in dirset order.
std::vector<DirectionalExample> expand(const MultiWayRecord& record, const DirectionSet& dirset);

}  // namespace lmt
