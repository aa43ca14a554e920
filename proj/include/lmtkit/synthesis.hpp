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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/language.hpp"
#include "lmtkit/prompt.hpp"

namespace lmt {

class Registry;
class LineProcess;

struct TranslationRequest {
  std::string id;
  std::string src_lang;
  std::string tgt_lang;
  std::string text;
};

/// Anything that turns (src_lang, tgt_lang, text) into a translation.
/// Implementations throw BackendFailure for a failed item; other errors
/// (ProtocolError, ...) are fatal to the run.
class TranslationBackend {
 public:
  virtual ~TranslationBackend() = default;
  virtual std::string translate(const TranslationRequest& request) = 0;
};

/// Returns the input unchanged.
class IdentityBackend final : public TranslationBackend {
 public:
  std::string translate(const TranslationRequest& request) override { return request.text; }
};

/// Word-for-word substitution over whitespace tokens, one table per
/// direction. A direction without a table is a BackendFailure; unknown words
/// are copied through unless `strict` is set, in which case they fail.
class DictionaryBackend final : public TranslationBackend {
 public:
  using Table = std::map<std::string, std::string, std::less<>>;

  explicit DictionaryBackend(bool strict = false) : strict_(strict) {}

  void add(const Direction& direction, Table table);
  std::string translate(const TranslationRequest& request) override;

 private:
  bool strict_;
  std::map<std::string, Table> tables_;
};

/// Out-of-process backend. Writes {"id","src_lang","tgt_lang","text"} per
/// request and reads {"id","text"} (success) or {"id","error"} (item failure).
class SubprocessBackend final : public TranslationBackend {
 public:
  explicit SubprocessBackend(const std::string& command);
  ~SubprocessBackend() override;

  std::string translate(const TranslationRequest& request) override;

 private:
  std::unique_ptr<LineProcess> process_;
};

struct SynthesisOptions {
  /// The run aborts when failed / attempted exceeds this.
  double max_failure_ratio = 0.10;
};

struct SynthesisResult {
  std::vector<DirectionalExample> examples;
  std::size_t attempted = 0;
  std::size_t failed = 0;
};

/// Translates each monolingual segment along `direction` (source must be en
/// or zh and match the segment language). Failed items are logged and
/// skipped; SynthesisAborted is thrown once the whole input has been tried
/// if the failure ratio is above the limit. Output follows input order, ids
/// are "<segment id>#<src>2<tgt>".
SynthesisResult synth_direct(std::span<const MonoSegment> mono, TranslationBackend& backend,
                             const Direction& direction, const Registry& registry,
                             const SynthesisOptions& options = {});

/// For every en<->X pair (either orientation, X outside {en, zh}) the English
/// side is translated en->zh, and zh->X plus X->zh examples are emitted. A
/// record contributing both en->X and X->en is used once.
SynthesisResult synth_pivot(std::span<const DirectionalExample> en_x_pairs,
                            TranslationBackend& en2zh, const Registry& registry,
                            const SynthesisOptions& options = {});

enum class InferenceStrategy { kDt, kPt, kPmpO, kPmpS };

std::string_view to_string(InferenceStrategy s);
/// "dt", "pt", "pmp-o", "pmp-s" (case-insensitive, '_' accepted for '-').
InferenceStrategy parse_inference_strategy(std::string_view text);

struct InferenceInput {
  std::string id;
  Direction direction;
  std::string src;
  /// Gold auxiliary sentence, required by PMP_O.
  std::optional<std::string> aux;
};

/// Generation prompts (empty loss span) for one input.
///   DT     one STP prompt.
///   PT     two STP prompts, X->en then en->Y, ids "<id>:pt1" and "<id>:pt2";
///          the second source is the backend's output for the first. Invalid
///          when en is already on either side.
///   PMP_O  one PMP prompt with the gold auxiliary.
///   PMP_S  one PMP prompt whose auxiliary is the backend's src->aux output.
/// Throws NoAuxiliaryDefined for PMP on directions without an auxiliary and
/// InvalidArgument when a required backend or gold auxiliary is missing.
std::vector<PromptedExample> build_inference_prompt(InferenceStrategy strategy,
                                                    const InferenceInput& input,
                                                    const Registry& registry,
                                                    TranslationBackend* backend = nullptr);

}  // namespace lmt
