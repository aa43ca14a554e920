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
#include <optional>
#include <string>
#include <string_view>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/language.hpp"

namespace lmt {

class Registry;

/// Version tag written with every rendered prompt.
inline constexpr std::string_view kPromptSchema = "v1";

enum class PromptFormat { kStp, kPmp, kCptBilingual, kCptMono };

std::string_view to_string(PromptFormat f);
PromptFormat parse_prompt_format(std::string_view text);

/// A rendered training or inference string. [loss_start, loss_end) are byte
/// offsets of the completion the trainer computes loss on; inference prompts
/// carry an empty span at the end of the text.
struct PromptedExample {
  std::string id;
  std::string text;
  std::size_t loss_start = 0;
  std::size_t loss_end = 0;
  PromptFormat format = PromptFormat::kStp;
  std::string src_lang;
  std::string tgt_lang;
  std::optional<std::string> aux_lang;

  std::string_view loss_slice() const {
    return std::string_view(text).substr(loss_start, loss_end - loss_start);
  }
  friend bool operator==(const PromptedExample&, const PromptedExample&) = default;
};

/// {"text","loss_start","loss_end","format","src_lang","tgt_lang","aux_lang",
///  "id","prompt_schema"}; aux_lang is null when absent.
std::string to_json_line(const PromptedExample& prompt);
PromptedExample prompted_from_json_line(std::string_view line);

/// Translate the following text from {Src} to {Tgt}.\n{Src}: {src}\n{Tgt}: {tgt}
/// Loss covers {tgt}. Throws EmptySource, UnknownLanguage, InvalidRecord (empty
/// target).
PromptedExample render_stp(const DirectionalExample& example, const Registry& registry);

/// As render_stp with "{Aux}: {aux_text}\n" between the source and target
/// lines. aux_lang must equal registry.auxiliary_for(direction); throws
/// NoAuxiliaryDefined when the direction has none.
PromptedExample render_pmp(const DirectionalExample& example, std::string_view aux_text,
                           std::string_view aux_lang, const Registry& registry);

enum class CptLossSpan { kTarget, kFullSequence };

/// "[{SRC}2{TGT}] {src} [{TGT}] {tgt}" with upper-cased codes.
PromptedExample render_cpt_bilingual(const DirectionalExample& example,
                                     CptLossSpan span = CptLossSpan::kTarget);

/// Raw text, loss over all of it.
PromptedExample render_cpt_mono(std::string_view id, std::string_view lang,
                                std::string_view text);

struct ParsedCpt {
  Direction direction;
  std::string src;
  std::string tgt;

  friend bool operator==(const ParsedCpt&, const ParsedCpt&) = default;
};

/// Inverse of render_cpt_bilingual. The separator is the first " [{TGT}] "
/// after the direction tag, so sources containing that token do not
/// round-trip. Throws ParseError.
ParsedCpt parse_cpt_bilingual(std::string_view text);

/// Generation prompt (no target): STP, or PMP when `aux` is given. The loss
/// span is empty and sits at the end of the text.
PromptedExample render_generation_prompt(std::string_view id, const Direction& direction,
                                         std::string_view src, const Registry& registry,
                                         const std::optional<std::pair<std::string, std::string>>&
                                             aux = std::nullopt);

}  // namespace lmt
