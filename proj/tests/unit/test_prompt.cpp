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

#include <doctest.h>

#include <random>

#include "lmtkit/prompt.hpp"
#include "support.hpp"

using namespace lmt;
using testing::builtin;
using testing::error_of;
using testing::ex;

TEST_SUITE("prompt") {
  TEST_CASE("STP layout and loss span") {
    const auto p = render_stp(ex("r#en2fr", "en", "fr", "Hello.", "Bonjour."), builtin());
    CHECK(p.text ==
          "Translate the following text from English to French.\nEnglish: Hello.\nFrench: Bonjour.");
    CHECK(p.loss_slice() == "Bonjour.");
    CHECK(p.loss_end == p.text.size());
    CHECK(p.format == PromptFormat::kStp);
    CHECK_FALSE(p.aux_lang.has_value());
  }

  TEST_CASE("PMP inserts the auxiliary line") {
    const auto p = render_pmp(ex("r#en2bg", "en", "bg", "Hello.", "Здравейте."), "Здравствуйте.",
                              "ru", builtin());
    CHECK(p.text ==
          "Translate the following text from English to Bulgarian.\nEnglish: Hello.\n"
          "Russian: Здравствуйте.\nBulgarian: Здравейте.");
    CHECK(p.loss_slice() == "Здравейте.");
    CHECK(p.aux_lang == "ru");

    const auto z = render_pmp(ex("r#zh2kk", "zh", "kk", "你好", "Сәлем"), "Hello", "en", builtin());
    CHECK(z.text.find("\nEnglish: Hello\nKazakh: ") != std::string::npos);
  }

  TEST_CASE("PMP errors") {
    const auto e = ex("r#en2ar", "en", "ar", "a", "b");
    CHECK(error_of([&] { render_pmp(e, "x", "fa", builtin()); }) == ErrorCode::kNoAuxiliaryDefined);
    const auto bg = ex("r#en2bg", "en", "bg", "a", "b");
    CHECK(error_of([&] { render_pmp(bg, "x", "uk", builtin()); }) == ErrorCode::kInvalidArgument);
    CHECK(error_of([&] { render_pmp(bg, "", "ru", builtin()); }) == ErrorCode::kInvalidArgument);
  }

  TEST_CASE("STP errors") {
    CHECK(error_of([] { render_stp(ex("a", "en", "fr", "", "b"), builtin()); }) ==
          ErrorCode::kEmptySource);
    CHECK(error_of([] { render_stp(ex("a", "en", "fr", "a", ""), builtin()); }) ==
          ErrorCode::kInvalidRecord);
    CHECK(error_of([] { render_stp(ex("a", "en", "xx", "a", "b"), builtin()); }) ==
          ErrorCode::kUnknownLanguage);
  }

  TEST_CASE("loss slice is the target for random texts") {
    std::mt19937 rng(11);
    const std::vector<std::string> pieces{"a", " ", "\n", "你", "é", ":", "French: "};
    for (int i = 0; i < 300; ++i) {
      std::string src, tgt;
      for (int k = 0; k < 1 + static_cast<int>(rng() % 8); ++k) src += pieces[rng() % pieces.size()];
      for (int k = 0; k < 1 + static_cast<int>(rng() % 8); ++k) tgt += pieces[rng() % pieces.size()];
      const auto e = ex("r" + std::to_string(i), "en", "bg", src, tgt);
      CHECK(render_stp(e, builtin()).loss_slice() == tgt);
      CHECK(render_pmp(e, src, "ru", builtin()).loss_slice() == tgt);
      CHECK(render_cpt_bilingual(e).loss_slice() == tgt);
      CHECK(render_cpt_bilingual(e, CptLossSpan::kFullSequence).loss_start == 0);
    }
  }

  TEST_CASE("CPT bilingual format and round-trip") {
    const auto e = ex("r#zh2mn_cn", "zh", "mn_cn", "你好", "сайн");
    const auto p = render_cpt_bilingual(e);
    CHECK(p.text == "[ZH2MN_CN] 你好 [MN_CN] сайн");
    const auto back = parse_cpt_bilingual(p.text);
    CHECK(back == ParsedCpt{{"zh", "mn_cn"}, "你好", "сайн"});

    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
      std::string src = "s", tgt;
      for (int k = 0; k < static_cast<int>(rng() % 6); ++k) src += "[EN] x"[rng() % 6];
      for (int k = 0; k < static_cast<int>(rng() % 6); ++k) tgt += " [FR] y"[rng() % 7];
      CAPTURE(src);
      const auto round = parse_cpt_bilingual(render_cpt_bilingual(ex("a", "en", "fr", src, tgt)).text);
      CHECK(round.direction == Direction{"en", "fr"});
      if (src.find(" [FR] ") == std::string::npos) {
        CHECK(round.src == src);
        CHECK(round.tgt == tgt);
      }
    }
  }

  TEST_CASE("CPT parse errors") {
    CHECK(error_of([] { parse_cpt_bilingual("no tag"); }) == ErrorCode::kParseError);
    CHECK(error_of([] { parse_cpt_bilingual("[EN2FR missing"); }) == ErrorCode::kParseError);
    CHECK(error_of([] { parse_cpt_bilingual("[ENFR] a [FR] b"); }) == ErrorCode::kParseError);
    CHECK(error_of([] { parse_cpt_bilingual("[EN2FR] a b"); }) == ErrorCode::kParseError);
  }

  TEST_CASE("CPT mono covers the whole text") {
    const auto p = render_cpt_mono("m1", "kk", "Сәлем әлем");
    CHECK(p.loss_slice() == p.text);
    CHECK(p.format == PromptFormat::kCptMono);
  }

  TEST_CASE("generation prompts end with the target label") {
    const auto p = render_generation_prompt("g1", {"fr", "en"}, "Bonjour", builtin());
    CHECK(p.text == "Translate the following text from French to English.\nFrench: Bonjour\nEnglish: ");
    CHECK(p.loss_start == p.text.size());
    CHECK(p.loss_slice().empty());

    const auto with_aux = render_generation_prompt("g2", {"en", "kk"}, "Hi", builtin(),
                                                   std::pair<std::string, std::string>{"ru", "Привет"});
    CHECK(with_aux.format == PromptFormat::kPmp);
    CHECK(with_aux.text.ends_with("Russian: Привет\nKazakh: "));
    CHECK(error_of([] { render_generation_prompt("g", {"en", "fr"}, "", builtin()); }) ==
          ErrorCode::kEmptySource);
  }

  TEST_CASE("JSON line round-trip") {
    auto p = render_pmp(ex("r#en2bg", "en", "bg", "a\n\"q\"", "б"), "в", "ru", builtin());
    const auto line = to_json_line(p);
    CHECK(line.find("\"prompt_schema\":\"v1\"") != std::string::npos);
    CHECK(prompted_from_json_line(line) == p);
    const auto s = render_stp(ex("x", "en", "fr", "a", "b"), builtin());
    CHECK(to_json_line(s).find("\"aux_lang\":null") != std::string::npos);
    CHECK(prompted_from_json_line(to_json_line(s)) == s);
    CHECK(error_of([] { prompted_from_json_line("{}"); }) == ErrorCode::kParseError);
  }

  TEST_CASE("format names") {
    for (auto f : {PromptFormat::kStp, PromptFormat::kPmp, PromptFormat::kCptBilingual,
                   PromptFormat::kCptMono}) {
      CHECK(parse_prompt_format(to_string(f)) == f);
    }
    CHECK(error_of([] { parse_prompt_format("stp"); }) == ErrorCode::kInvalidArgument);
  }
}
