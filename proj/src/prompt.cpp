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

#include "lmtkit/prompt.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "lmtkit/error.hpp"
#include "lmtkit/registry.hpp"

namespace lmt {

std::string_view to_string(PromptFormat f) {
  switch (f) {
    case PromptFormat::kStp: return "STP";
    case PromptFormat::kPmp: return "PMP";
    case PromptFormat::kCptBilingual: return "CPT_BILINGUAL";
    case PromptFormat::kCptMono: return "CPT_MONO";
  }
  return "STP";
}

PromptFormat parse_prompt_format(std::string_view text) {
  if (text == "STP") return PromptFormat::kStp;
  if (text == "PMP") return PromptFormat::kPmp;
  if (text == "CPT_BILINGUAL") return PromptFormat::kCptBilingual;
  if (text == "CPT_MONO") return PromptFormat::kCptMono;
  throw Error(ErrorCode::kInvalidArgument, "unknown prompt format '" + std::string(text) + "'");
}

std::string to_json_line(const PromptedExample& p) {
  nlohmann::ordered_json j;
  j["text"] = p.text;
  j["loss_start"] = p.loss_start;
  j["loss_end"] = p.loss_end;
  j["format"] = std::string(to_string(p.format));
  j["src_lang"] = p.src_lang;
  j["tgt_lang"] = p.tgt_lang;
  j["aux_lang"] = p.aux_lang ? nlohmann::ordered_json(*p.aux_lang) : nlohmann::ordered_json();
  j["id"] = p.id;
  j["prompt_schema"] = std::string(kPromptSchema);
  try {
    return j.dump();
  } catch (const nlohmann::json::type_error& e) {
    throw Error(ErrorCode::kInvalidRecord, std::string("cannot serialize prompt: ") + e.what());
  }
}

PromptedExample prompted_from_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
    PromptedExample p;
    p.text = j.at("text").get<std::string>();
    p.loss_start = j.at("loss_start").get<std::size_t>();
    p.loss_end = j.at("loss_end").get<std::size_t>();
    p.format = parse_prompt_format(j.at("format").get<std::string>());
    p.src_lang = j.at("src_lang").get<std::string>();
    p.tgt_lang = j.at("tgt_lang").get<std::string>();
    if (!j.at("aux_lang").is_null()) p.aux_lang = j.at("aux_lang").get<std::string>();
    p.id = j.at("id").get<std::string>();
    if (p.loss_start > p.loss_end || p.loss_end > p.text.size()) {
      throw Error(ErrorCode::kInvalidRecord, "loss span outside text");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

namespace {

struct Rendered {
  std::string text;
  std::size_t loss_start;
};

// Shared layout of STP and PMP; the target (possibly empty) is appended last.
Rendered render_translation(std::string_view src_name, std::string_view tgt_name,
                            std::string_view src, std::string_view aux_name,
                            std::string_view aux, std::string_view tgt) {
  std::string text;
  text.reserve(64 + src.size() + aux.size() + tgt.size());
  text += "Translate the following text from ";
  text += src_name;
  text += " to ";
  text += tgt_name;
  text += ".\n";
  text += src_name;
  text += ": ";
  text += src;
  text += '\n';
  if (!aux_name.empty()) {
    text += aux_name;
    text += ": ";
    text += aux;
    text += '\n';
  }
  text += tgt_name;
  text += ": ";
  const std::size_t start = text.size();
  text += tgt;
  return {std::move(text), start};
}

void check_texts(const DirectionalExample& e) {
  if (e.src.empty()) throw Error(ErrorCode::kEmptySource, "example '" + e.id + "' has no source");
  if (e.tgt.empty()) throw Error(ErrorCode::kInvalidRecord, "example '" + e.id + "' has no target");
}

std::string upper(std::string_view code) {
  std::string out(code);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

std::string lower(std::string_view code) {
  std::string out(code);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Resolves and checks the auxiliary language for a PMP prompt.
std::string expected_auxiliary(const Direction& d, std::string_view aux_lang,
                               const Registry& registry) {
  auto expected = registry.auxiliary_for(d);
  if (!expected) {
    throw Error(ErrorCode::kNoAuxiliaryDefined, "no auxiliary language for " + d.key());
  }
  if (*expected != aux_lang) {
    throw Error(ErrorCode::kInvalidArgument, "auxiliary for " + d.key() + " is '" + *expected +
                                                 "', not '" + std::string(aux_lang) + "'");
  }
  return *expected;
}

}  // namespace

PromptedExample render_stp(const DirectionalExample& e, const Registry& registry) {
  check_texts(e);
  const auto& src = registry.at(e.src_lang);
  const auto& tgt = registry.at(e.tgt_lang);
  auto r = render_translation(src.name, tgt.name, e.src, {}, {}, e.tgt);
  const std::size_t end = r.text.size();
  return {e.id, std::move(r.text), r.loss_start, end, PromptFormat::kStp,
          e.src_lang, e.tgt_lang, std::nullopt};
}

PromptedExample render_pmp(const DirectionalExample& e, std::string_view aux_text,
                           std::string_view aux_lang, const Registry& registry) {
  const auto aux_code = expected_auxiliary(e.direction(), aux_lang, registry);
  check_texts(e);
  if (aux_text.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "example '" + e.id + "' has an empty auxiliary");
  }
  const auto& src = registry.at(e.src_lang);
  const auto& tgt = registry.at(e.tgt_lang);
  const auto& aux = registry.at(aux_code);
  auto r = render_translation(src.name, tgt.name, e.src, aux.name, aux_text, e.tgt);
  const std::size_t end = r.text.size();
  return {e.id, std::move(r.text), r.loss_start, end, PromptFormat::kPmp,
          e.src_lang, e.tgt_lang, aux_code};
}

PromptedExample render_cpt_bilingual(const DirectionalExample& e, CptLossSpan span) {
  const std::string src_tag = upper(e.src_lang);
  const std::string tgt_tag = upper(e.tgt_lang);
  std::string text;
  text.reserve(16 + e.src.size() + e.tgt.size());
  text += '[';
  text += src_tag;
  text += '2';
  text += tgt_tag;
  text += "] ";
  text += e.src;
  text += " [";
  text += tgt_tag;
  text += "] ";
  const std::size_t start = span == CptLossSpan::kTarget ? text.size() : 0;
  text += e.tgt;
  const std::size_t end = text.size();
  return {e.id, std::move(text), start, end, PromptFormat::kCptBilingual,
          e.src_lang, e.tgt_lang, std::nullopt};
}

PromptedExample render_cpt_mono(std::string_view id, std::string_view lang,
                                std::string_view text) {
  return {std::string(id), std::string(text), 0, text.size(), PromptFormat::kCptMono,
          std::string(lang), std::string(lang), std::nullopt};
}

ParsedCpt parse_cpt_bilingual(std::string_view text) {
  if (text.empty() || text.front() != '[') {
    throw Error(ErrorCode::kParseError, "CPT text must start with a direction tag");
  }
  const auto close = text.find("] ");
  if (close == std::string_view::npos) throw Error(ErrorCode::kParseError, "unterminated direction tag");
  const auto tag = lower(text.substr(1, close - 1));
  Direction d;
  try {
    d = parse_direction(tag);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParseError, e.detail());
  }
  const std::string sep = " [" + upper(d.tgt) + "] ";
  const auto body = text.substr(close + 2);
  const auto pos = body.find(sep);
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::kParseError, "missing target separator '" + sep + "'");
  }
  return {std::move(d), std::string(body.substr(0, pos)),
          std::string(body.substr(pos + sep.size()))};
}

PromptedExample render_generation_prompt(
    std::string_view id, const Direction& direction, std::string_view src,
    const Registry& registry, const std::optional<std::pair<std::string, std::string>>& aux) {
  if (src.empty()) throw Error(ErrorCode::kEmptySource, "empty source for '" + std::string(id) + "'");
  const auto& src_lang = registry.at(direction.src);
  const auto& tgt_lang = registry.at(direction.tgt);
  PromptedExample p;
  p.id = std::string(id);
  p.src_lang = direction.src;
  p.tgt_lang = direction.tgt;
  if (aux) {
    const auto code = expected_auxiliary(direction, aux->first, registry);
    if (aux->second.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty auxiliary for '" + std::string(id) + "'");
    }
    auto r = render_translation(src_lang.name, tgt_lang.name, src, registry.at(code).name,
                                aux->second, {});
    p.text = std::move(r.text);
    p.format = PromptFormat::kPmp;
    p.aux_lang = code;
  } else {
    auto r = render_translation(src_lang.name, tgt_lang.name, src, {}, {}, {});
    p.text = std::move(r.text);
    p.format = PromptFormat::kStp;
  }
  p.loss_start = p.loss_end = p.text.size();
  return p;
}

}  // namespace lmt
