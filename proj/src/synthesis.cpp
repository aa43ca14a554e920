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

#include "lmtkit/synthesis.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "lmtkit/error.hpp"
#include "lmtkit/log.hpp"
#include "lmtkit/registry.hpp"
#include "lmtkit/subprocess.hpp"

namespace lmt {

void DictionaryBackend::add(const Direction& direction, Table table) {
  tables_[direction.key()] = std::move(table);
}

std::string DictionaryBackend::translate(const TranslationRequest& request) {
  const auto it = tables_.find(Direction{request.src_lang, request.tgt_lang}.key());
  if (it == tables_.end()) {
    throw Error(ErrorCode::kBackendFailure,
                "no dictionary for " + request.src_lang + "2" + request.tgt_lang);
  }
  std::istringstream words(request.text);
  std::string word;
  std::string out;
  while (words >> word) {
    if (!out.empty()) out += ' ';
    const auto hit = it->second.find(word);
    if (hit != it->second.end()) {
      out += hit->second;
    } else if (strict_) {
      throw Error(ErrorCode::kBackendFailure, "no entry for '" + word + "'");
    } else {
      out += word;
    }
  }
  return out;
}

SubprocessBackend::SubprocessBackend(const std::string& command)
    : process_(std::make_unique<LineProcess>(command)) {}

SubprocessBackend::~SubprocessBackend() = default;

std::string SubprocessBackend::translate(const TranslationRequest& request) {
  nlohmann::ordered_json j;
  j["id"] = request.id;
  j["src_lang"] = request.src_lang;
  j["tgt_lang"] = request.tgt_lang;
  j["text"] = request.text;
  const auto line = process_->exchange(j.dump());
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kProtocolError, std::string("backend reply is not JSON: ") + e.what());
  }
  if (!reply.is_object() || !reply.contains("id") || !reply["id"].is_string()) {
    throw Error(ErrorCode::kProtocolError, "backend reply lacks an id");
  }
  if (reply["id"].get<std::string>() != request.id) {
    throw Error(ErrorCode::kProtocolError, "backend replied for '" +
                                               reply["id"].get<std::string>() + "' while '" +
                                               request.id + "' was pending");
  }
  if (reply.contains("error")) {
    throw Error(ErrorCode::kBackendFailure,
                reply["error"].is_string() ? reply["error"].get<std::string>() : reply["error"].dump());
  }
  if (!reply.contains("text") || !reply["text"].is_string()) {
    throw Error(ErrorCode::kProtocolError, "backend reply must carry \"text\" or \"error\"");
  }
  return reply["text"].get<std::string>();
}

namespace {

const std::string kEn(kEnglish);
const std::string kZh(kChinese);

// Runs one backend call; returns nullopt (and logs) on an item failure.
std::optional<std::string> try_translate(TranslationBackend& backend,
                                         const TranslationRequest& request) {
  try {
    auto out = backend.translate(request);
    if (out.empty()) throw Error(ErrorCode::kBackendFailure, "empty translation");
    return out;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kBackendFailure) throw;
    logger()->warn("synthesis: skipping '{}': {}", request.id, e.detail());
    return std::nullopt;
  }
}

void check_failures(const SynthesisResult& r, const SynthesisOptions& options) {
  if (r.attempted == 0) return;
  const double ratio = static_cast<double>(r.failed) / static_cast<double>(r.attempted);
  if (ratio > options.max_failure_ratio) {
    throw Error(ErrorCode::kSynthesisAborted,
                std::to_string(r.failed) + " of " + std::to_string(r.attempted) +
                    " backend calls failed");
  }
}

}  // namespace

SynthesisResult synth_direct(std::span<const MonoSegment> mono, TranslationBackend& backend,
                             const Direction& direction, const Registry& registry,
                             const SynthesisOptions& options) {
  registry.at(direction.src);
  registry.at(direction.tgt);
  if (!is_center(direction.src) || direction.src == direction.tgt) {
    throw Error(ErrorCode::kInvalidArgument,
                "direct synthesis needs an en or zh source, got " + direction.key());
  }
  SynthesisResult result;
  result.examples.reserve(mono.size());
  for (const auto& seg : mono) {
    if (seg.lang != direction.src) {
      throw Error(ErrorCode::kInvalidRecord, "segment '" + seg.id + "' is '" + seg.lang +
                                                 "', expected '" + direction.src + "'");
    }
    if (seg.text.empty()) {
      throw Error(ErrorCode::kEmptySource, "segment '" + seg.id + "' is empty");
    }
    const auto id = example_id(seg.id, direction);
    ++result.attempted;
    auto tgt = try_translate(backend, {id, direction.src, direction.tgt, seg.text});
    if (!tgt) {
      ++result.failed;
      continue;
    }
    result.examples.push_back(
        {id, direction.src, direction.tgt, seg.text, std::move(*tgt), Provenance::kSynthDirect});
  }
  check_failures(result, options);
  return result;
}

SynthesisResult synth_pivot(std::span<const DirectionalExample> en_x_pairs,
                            TranslationBackend& en2zh, const Registry& registry,
                            const SynthesisOptions& options) {
  SynthesisResult result;
  std::unordered_set<std::string> seen;
  for (const auto& pair : en_x_pairs) {
    const bool en_src = pair.src_lang == kEnglish;
    if (!en_src && pair.tgt_lang != kEnglish) {
      throw Error(ErrorCode::kInvalidRecord, "pivot input '" + pair.id + "' has no English side");
    }
    const auto& x = en_src ? pair.tgt_lang : pair.src_lang;
    const auto& en_text = en_src ? pair.src : pair.tgt;
    const auto& x_text = en_src ? pair.tgt : pair.src;
    registry.at(x);
    if (is_center(x)) {
      throw Error(ErrorCode::kInvalidRecord, "pivot input '" + pair.id + "' pairs en with " + x);
    }
    if (en_text.empty() || x_text.empty()) {
      throw Error(ErrorCode::kEmptySource, "pivot input '" + pair.id + "' has an empty side");
    }
    const std::string record(record_id_of(pair.id));
    if (!seen.insert(record + "#" + x).second) continue;

    ++result.attempted;
    auto zh = try_translate(en2zh, {example_id(record, {kEn, kZh}), kEn, kZh, en_text});
    if (!zh) {
      ++result.failed;
      continue;
    }
    const Direction zx{kZh, x};
    const Direction xz{x, kZh};
    result.examples.push_back(
        {example_id(record, zx), kZh, x, *zh, x_text, Provenance::kSynthPivot});
    result.examples.push_back(
        {example_id(record, xz), x, kZh, x_text, std::move(*zh), Provenance::kSynthPivot});
  }
  check_failures(result, options);
  return result;
}

std::string_view to_string(InferenceStrategy s) {
  switch (s) {
    case InferenceStrategy::kDt: return "dt";
    case InferenceStrategy::kPt: return "pt";
    case InferenceStrategy::kPmpO: return "pmp-o";
    case InferenceStrategy::kPmpS: return "pmp-s";
  }
  return "dt";
}

InferenceStrategy parse_inference_strategy(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (s == "dt") return InferenceStrategy::kDt;
  if (s == "pt") return InferenceStrategy::kPt;
  if (s == "pmp-o") return InferenceStrategy::kPmpO;
  if (s == "pmp-s") return InferenceStrategy::kPmpS;
  throw Error(ErrorCode::kInvalidArgument, "unknown inference strategy '" + std::string(text) + "'");
}

namespace {

TranslationBackend& need_backend(TranslationBackend* backend, InferenceStrategy s) {
  if (backend == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                "strategy " + std::string(to_string(s)) + " needs a translation backend");
  }
  return *backend;
}

std::string need_auxiliary(const Direction& d, const Registry& registry) {
  auto aux = registry.auxiliary_for(d);
  if (!aux) throw Error(ErrorCode::kNoAuxiliaryDefined, "no auxiliary language for " + d.key());
  return *aux;
}

}  // namespace

std::vector<PromptedExample> build_inference_prompt(InferenceStrategy strategy,
                                                    const InferenceInput& input,
                                                    const Registry& registry,
                                                    TranslationBackend* backend) {
  const auto& d = input.direction;
  switch (strategy) {
    case InferenceStrategy::kDt:
      return {render_generation_prompt(input.id, d, input.src, registry)};

    case InferenceStrategy::kPt: {
      if (d.src == kEnglish || d.tgt == kEnglish) {
        throw Error(ErrorCode::kInvalidArgument, "pivot through English is undefined for " + d.key());
      }
      auto& b = need_backend(backend, strategy);
      const Direction first{d.src, kEn};
      const Direction second{kEn, d.tgt};
      std::vector<PromptedExample> out;
      out.push_back(render_generation_prompt(input.id + ":pt1", first, input.src, registry));
      const auto en = b.translate({input.id + ":pt1", first.src, first.tgt, input.src});
      out.push_back(render_generation_prompt(input.id + ":pt2", second, en, registry));
      return out;
    }

    case InferenceStrategy::kPmpO: {
      const auto aux_lang = need_auxiliary(d, registry);
      if (!input.aux || input.aux->empty()) {
        throw Error(ErrorCode::kInvalidArgument, "PMP-O needs a gold auxiliary for '" + input.id + "'");
      }
      return {render_generation_prompt(input.id, d, input.src, registry,
                                       std::make_pair(aux_lang, *input.aux))};
    }

    case InferenceStrategy::kPmpS: {
      const auto aux_lang = need_auxiliary(d, registry);
      auto& b = need_backend(backend, strategy);
      auto aux = b.translate({input.id + ":aux", d.src, aux_lang, input.src});
      return {render_generation_prompt(input.id, d, input.src, registry,
                                       std::make_pair(aux_lang, std::move(aux)))};
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown inference strategy");
}

}  // namespace lmt
