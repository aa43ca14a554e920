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
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lmtkit/language.hpp"

namespace lmt {

class Registry;

/// One semantic unit aligned across a subset of languages (a FLORES-style
/// multi-way row).
struct MultiWayRecord {
  std::string id;
  std::map<std::string, std::string> sentences;

  const std::string* sentence(std::string_view lang) const {
    auto it = sentences.find(std::string(lang));
    return it == sentences.end() ? nullptr : &it->second;
  }
  friend bool operator==(const MultiWayRecord&, const MultiWayRecord&) = default;
};

enum class Provenance { kHuman, kSynthDirect, kSynthPivot };

std::string_view to_string(Provenance p);
Provenance parse_provenance(std::string_view text);

/// A single training pair. Ids follow "<record_id>#<src>2<tgt>".
struct DirectionalExample {
  std::string id;
  std::string src_lang;
  std::string tgt_lang;
  std::string src;
  std::string tgt;
  Provenance provenance = Provenance::kHuman;

  Direction direction() const { return {src_lang, tgt_lang}; }
  friend bool operator==(const DirectionalExample&, const DirectionalExample&) = default;
};

struct ScoredPair {
  DirectionalExample example;
  double qe_score = 0.0;

  friend bool operator==(const ScoredPair&, const ScoredPair&) = default;
};

/// "<record_id>#<src>2<tgt>".
std::string example_id(std::string_view record_id, const Direction& direction);
/// The part of an example id before the last '#', or the whole id.
std::string_view record_id_of(std::string_view example_id);

/// Throws InvalidRecord when an example violates its invariants (empty id or
/// text, src_lang == tgt_lang, no center on either side).
void validate(const DirectionalExample& example);

/// Streaming reader for *.mwjsonl: {"id": ..., "sentences": {"en": ..., ...}}
/// per line. Checks ids for uniqueness across the stream and every language
/// key against the registry.
class MultiWayReader {
 public:
  MultiWayReader(std::istream& in, const Registry& registry);
  std::optional<MultiWayRecord> next();
  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  const Registry& registry_;
  std::size_t line_ = 0;
  std::unordered_set<std::string> seen_;
};

/// Streaming reader for *.djsonl and *.sjsonl. A registry, when given, is
/// used to reject unknown language codes.
class ExampleReader {
 public:
  explicit ExampleReader(std::istream& in, const Registry* registry = nullptr);
  std::optional<DirectionalExample> next();
  /// Like next() but also requires and returns "qe_score".
  std::optional<ScoredPair> next_scored();
  std::size_t line() const { return line_; }

 private:
  std::optional<std::string> next_line();

  std::istream& in_;
  const Registry* registry_;
  std::size_t line_ = 0;
};

std::string to_json_line(const MultiWayRecord& record);
std::string to_json_line(const DirectionalExample& example);
std::string to_json_line(const ScoredPair& pair);

/// One JSON object per line; returns the number written. Throws IoError when
/// the stream fails.
std::size_t write_examples(std::span<const DirectionalExample> examples, std::ostream& out);
std::size_t write_scored(std::span<const ScoredPair> pairs, std::ostream& out);
std::size_t write_multiway(std::span<const MultiWayRecord> records, std::ostream& out);

std::vector<MultiWayRecord> read_all_multiway(std::istream& in, const Registry& registry);
std::vector<DirectionalExample> read_all_examples(std::istream& in,
                                                  const Registry* registry = nullptr);

/// Monolingual segment used as input for direct synthesis:
/// {"id","lang","text"} per line.
struct MonoSegment {
  std::string id;
  std::string lang;
  std::string text;
};

std::vector<MonoSegment> read_all_mono(std::istream& in);

}  // namespace lmt
