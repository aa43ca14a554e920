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

#include "lmtkit/corpus_io.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "lmtkit/error.hpp"
#include "lmtkit/registry.hpp"

namespace lmt {

using ojson = nlohmann::ordered_json;

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kHuman: return "human";
    case Provenance::kSynthDirect: return "synth_direct";
    case Provenance::kSynthPivot: return "synth_pivot";
  }
  return "human";
}

Provenance parse_provenance(std::string_view text) {
  if (text == "human") return Provenance::kHuman;
  if (text == "synth_direct") return Provenance::kSynthDirect;
  if (text == "synth_pivot") return Provenance::kSynthPivot;
  throw Error(ErrorCode::kInvalidArgument, "unknown provenance '" + std::string(text) + "'");
}

std::string example_id(std::string_view record_id, const Direction& direction) {
  std::string id(record_id);
  id += '#';
  id += direction.key();
  return id;
}

std::string_view record_id_of(std::string_view example_id) {
  const auto pos = example_id.rfind('#');
  return pos == std::string_view::npos ? example_id : example_id.substr(0, pos);
}

void validate(const DirectionalExample& e) {
  if (e.id.empty()) throw Error(ErrorCode::kInvalidRecord, "example has an empty id");
  if (e.src_lang == e.tgt_lang) {
    throw Error(ErrorCode::kInvalidRecord, "example '" + e.id + "' has src_lang == tgt_lang");
  }
  if (!is_center(e.src_lang) && !is_center(e.tgt_lang)) {
    throw Error(ErrorCode::kInvalidRecord,
                "example '" + e.id + "' has no center language on either side");
  }
  if (e.src.empty() || e.tgt.empty()) {
    throw Error(ErrorCode::kInvalidRecord, "example '" + e.id + "' has empty text");
  }
}

namespace {

nlohmann::json parse_object(const std::string& text, std::size_t line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what(), line);
  }
  if (!j.is_object()) throw Error(ErrorCode::kParseError, "expected a JSON object", line);
  return j;
}

std::string string_field(const nlohmann::json& j, const char* key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::kParseError,
                std::string("missing or non-string field '") + key + "'", line);
  }
  return it->get<std::string>();
}

bool blank(const std::string& s) {
  return s.find_first_not_of(" \t\r") == std::string::npos;
}

std::string dump(const ojson& j) {
  try {
    return j.dump();
  } catch (const nlohmann::json::type_error& e) {
    throw Error(ErrorCode::kInvalidRecord, std::string("cannot serialize: ") + e.what());
  }
}

ojson example_json(const DirectionalExample& e) {
  ojson j;
  j["id"] = e.id;
  j["src_lang"] = e.src_lang;
  j["tgt_lang"] = e.tgt_lang;
  j["src"] = e.src;
  j["tgt"] = e.tgt;
  j["provenance"] = std::string(to_string(e.provenance));
  return j;
}

template <typename T>
std::size_t write_lines(std::span<const T> items, std::ostream& out) {
  std::size_t n = 0;
  for (const auto& item : items) {
    out << to_json_line(item) << '\n';
    if (!out) throw Error(ErrorCode::kIoError, "write failed after " + std::to_string(n) + " lines");
    ++n;
  }
  return n;
}

}  // namespace

MultiWayReader::MultiWayReader(std::istream& in, const Registry& registry)
    : in_(in), registry_(registry) {}

std::optional<MultiWayRecord> MultiWayReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (blank(text)) continue;
    const auto j = parse_object(text, line_);
    MultiWayRecord record;
    record.id = string_field(j, "id", line_);
    if (record.id.empty()) throw Error(ErrorCode::kInvalidRecord, "empty id", line_);
    auto sentences = j.find("sentences");
    if (sentences == j.end() || !sentences->is_object()) {
      throw Error(ErrorCode::kParseError, "missing object field 'sentences'", line_);
    }
    for (const auto& [lang, value] : sentences->items()) {
      if (!registry_.contains(lang)) {
        throw Error(ErrorCode::kUnknownLanguage, "unknown language '" + lang + "'", line_);
      }
      if (!value.is_string() || value.get_ref<const std::string&>().empty()) {
        throw Error(ErrorCode::kInvalidRecord,
                    "sentence for '" + lang + "' must be a non-empty string", line_);
      }
      record.sentences.emplace(lang, value.get<std::string>());
    }
    if (!seen_.insert(record.id).second) {
      throw Error(ErrorCode::kDuplicateRecord, "duplicate record id '" + record.id + "'", line_);
    }
    return record;
  }
  if (in_.bad()) throw Error(ErrorCode::kIoError, "read failed", line_);
  return std::nullopt;
}

ExampleReader::ExampleReader(std::istream& in, const Registry* registry)
    : in_(in), registry_(registry) {}

std::optional<std::string> ExampleReader::next_line() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    if (!blank(text)) return text;
  }
  if (in_.bad()) throw Error(ErrorCode::kIoError, "read failed", line_);
  return std::nullopt;
}

namespace {

DirectionalExample example_from_json(const nlohmann::json& j, std::size_t line,
                                     const Registry* registry) {
  DirectionalExample e;
  e.id = string_field(j, "id", line);
  e.src_lang = string_field(j, "src_lang", line);
  e.tgt_lang = string_field(j, "tgt_lang", line);
  e.src = string_field(j, "src", line);
  e.tgt = string_field(j, "tgt", line);
  if (auto p = j.find("provenance"); p != j.end()) {
    if (!p->is_string()) throw Error(ErrorCode::kParseError, "non-string 'provenance'", line);
    try {
      e.provenance = parse_provenance(p->get<std::string>());
    } catch (const Error& err) {
      throw Error(ErrorCode::kParseError, err.detail(), line);
    }
  }
  if (registry != nullptr) {
    for (const auto* lang : {&e.src_lang, &e.tgt_lang}) {
      if (!registry->contains(*lang)) {
        throw Error(ErrorCode::kUnknownLanguage, "unknown language '" + *lang + "'", line);
      }
    }
  }
  try {
    validate(e);
  } catch (const Error& err) {
    throw Error(err.code(), err.detail(), line);
  }
  return e;
}

}  // namespace

std::optional<DirectionalExample> ExampleReader::next() {
  auto text = next_line();
  if (!text) return std::nullopt;
  return example_from_json(parse_object(*text, line_), line_, registry_);
}

std::optional<ScoredPair> ExampleReader::next_scored() {
  auto text = next_line();
  if (!text) return std::nullopt;
  const auto j = parse_object(*text, line_);
  ScoredPair pair{example_from_json(j, line_, registry_), 0.0};
  auto score = j.find("qe_score");
  if (score == j.end() || !score->is_number()) {
    throw Error(ErrorCode::kParseError, "missing numeric field 'qe_score'", line_);
  }
  pair.qe_score = score->get<double>();
  if (!(pair.qe_score >= 0.0 && pair.qe_score <= 1.0)) {
    throw Error(ErrorCode::kInvalidScore, "qe_score outside [0,1] for '" + pair.example.id + "'",
                line_);
  }
  return pair;
}

std::string to_json_line(const MultiWayRecord& record) {
  ojson j;
  j["id"] = record.id;
  j["sentences"] = ojson::object();
  for (const auto& [lang, text] : record.sentences) j["sentences"][lang] = text;
  return dump(j);
}

std::string to_json_line(const DirectionalExample& example) {
  return dump(example_json(example));
}

std::string to_json_line(const ScoredPair& pair) {
  auto j = example_json(pair.example);
  j["qe_score"] = pair.qe_score;
  return dump(j);
}

std::size_t write_examples(std::span<const DirectionalExample> examples, std::ostream& out) {
  return write_lines(examples, out);
}

std::size_t write_scored(std::span<const ScoredPair> pairs, std::ostream& out) {
  return write_lines(pairs, out);
}

std::size_t write_multiway(std::span<const MultiWayRecord> records, std::ostream& out) {
  return write_lines(records, out);
}

std::vector<MultiWayRecord> read_all_multiway(std::istream& in, const Registry& registry) {
  MultiWayReader reader(in, registry);
  std::vector<MultiWayRecord> out;
  while (auto r = reader.next()) out.push_back(std::move(*r));
  return out;
}

std::vector<DirectionalExample> read_all_examples(std::istream& in, const Registry* registry) {
  ExampleReader reader(in, registry);
  std::vector<DirectionalExample> out;
  while (auto e = reader.next()) out.push_back(std::move(*e));
  return out;
}

std::vector<MonoSegment> read_all_mono(std::istream& in) {
  std::vector<MonoSegment> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (blank(text)) continue;
    const auto j = parse_object(text, line);
    MonoSegment seg{string_field(j, "id", line), string_field(j, "lang", line),
                    string_field(j, "text", line)};
    if (seg.id.empty()) throw Error(ErrorCode::kInvalidRecord, "empty id", line);
    out.push_back(std::move(seg));
  }
  return out;
}

}  // namespace lmt
