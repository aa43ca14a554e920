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
#include <sstream>

#include "lmtkit/corpus_io.hpp"
#include "support.hpp"

using namespace lmt;
using testing::builtin;
using testing::error_of;
using testing::ex;

namespace {

// Random UTF-8 text mixing ASCII, controls that need escaping, CJK and emoji.
std::string random_text(std::mt19937& rng) {
  static const std::vector<std::string> pieces{
      "a", "Z", " ", "\t", "\n", "\"", "\\", "/", "é", "ß", "你", "好", "🙂", " ", "\x01", "ק"};
  std::uniform_int_distribution<std::size_t> len(1, 24), pick(0, pieces.size() - 1);
  std::string s;
  for (std::size_t i = 0, n = len(rng); i < n; ++i) s += pieces[pick(rng)];
  return s;
}

}  // namespace

TEST_SUITE("corpus_io") {
  TEST_CASE("multi-way reader yields records in order") {
    std::istringstream in(R"({"id":"r1","sentences":{"en":"Hello","fr":"Bonjour"}}

{"id":"r2","sentences":{"zh":"你好"}}
)");
    MultiWayReader reader(in, builtin());
    auto a = reader.next();
    auto b = reader.next();
    CHECK_FALSE(reader.next().has_value());
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->id == "r1");
    CHECK(*a->sentence("fr") == "Bonjour");
    CHECK(a->sentence("de") == nullptr);
    CHECK(b->id == "r2");
    CHECK(reader.line() == 3);
  }

  TEST_CASE("multi-way reader errors name the line") {
    auto fails = [](const std::string& text, ErrorCode code, std::size_t line) {
      std::istringstream in(text);
      MultiWayReader reader(in, builtin());
      try {
        while (reader.next()) {
        }
        FAIL("expected an error");
      } catch (const Error& e) {
        CHECK(e.code() == code);
        CHECK(e.line() == line);
      }
    };
    fails("{\"id\":\"r1\",\"sentences\":{\"en\":\"a\"}}\n{\"id\":\"\",\"sentences\":{}}\n",
          ErrorCode::kInvalidRecord, 2);
    fails("{\"id\":\"r1\",\"sentences\":{\"xx\":\"a\"}}\n", ErrorCode::kUnknownLanguage, 1);
    fails("{\"id\":\"r1\",\"sentences\":{\"en\":\"\"}}\n", ErrorCode::kInvalidRecord, 1);
    fails("{\"id\":\"r1\",\"sentences\":{\"en\":\"a\"}}\n{\"id\":\"r1\",\"sentences\":{\"en\":\"b\"}}\n",
          ErrorCode::kDuplicateRecord, 2);
    fails("[1,2]\n", ErrorCode::kParseError, 1);
    fails("{\"id\":\"r1\"}\n", ErrorCode::kParseError, 1);
    fails("{\"id\":7,\"sentences\":{}}\n", ErrorCode::kParseError, 1);
  }

  TEST_CASE("unknown language error names the code") {
    std::istringstream in("{\"id\":\"r1\",\"sentences\":{\"xx\":\"a\"}}\n");
    MultiWayReader reader(in, builtin());
    try {
      reader.next();
      FAIL("expected UnknownLanguage");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("xx") != std::string::npos);
    }
  }

  TEST_CASE("example ids") {
    CHECK(example_id("r1", {"en", "fr"}) == "r1#en2fr");
    CHECK(record_id_of("r1#en2fr") == "r1");
    CHECK(record_id_of("a#b#zh2en") == "a#b");
    CHECK(record_id_of("plain") == "plain");
  }

  TEST_CASE("example validation") {
    CHECK_NOTHROW(validate(ex("a", "en", "zh", "x", "y")));
    CHECK(error_of([] { validate(ex("a", "fr", "de", "x", "y")); }) == ErrorCode::kInvalidRecord);
    CHECK(error_of([] { validate(ex("a", "en", "en", "x", "y")); }) == ErrorCode::kInvalidRecord);
    CHECK(error_of([] { validate(ex("a", "en", "fr", "", "y")); }) == ErrorCode::kInvalidRecord);
    CHECK(error_of([] { validate(ex("", "en", "fr", "x", "y")); }) == ErrorCode::kInvalidRecord);
  }

  TEST_CASE("write then read round-trips random unicode") {
    std::mt19937 rng(7);
    std::vector<DirectionalExample> xs;
    const std::vector<std::pair<std::string, std::string>> dirs{
        {"en", "fr"}, {"zh", "kk"}, {"ar", "en"}, {"en", "zh"}};
    for (int i = 0; i < 500; ++i) {
      const auto& [s, t] = dirs[i % dirs.size()];
      auto e = ex("r" + std::to_string(i) + "#" + s + "2" + t, s, t, random_text(rng), random_text(rng));
      e.provenance = static_cast<Provenance>(i % 3);
      xs.push_back(std::move(e));
    }
    std::stringstream buf;
    CHECK(write_examples(xs, buf) == xs.size());
    const auto text = buf.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(xs.size()));
    const auto back = read_all_examples(buf, &builtin());
    CHECK(back == xs);
  }

  TEST_CASE("empty input writes nothing") {
    std::stringstream buf;
    CHECK(write_examples({}, buf) == 0);
    CHECK(buf.str().empty());
    CHECK(read_all_examples(buf).empty());
  }

  TEST_CASE("scored pairs round-trip and validate scores") {
    std::vector<ScoredPair> xs{{ex("a#en2fr", "en", "fr", "x", "y"), 0.0},
                               {ex("b#en2fr", "en", "fr", "x", "z"), 1.0},
                               {ex("c#fr2en", "fr", "en", "q", "w"), 0.123456789012345}};
    std::stringstream buf;
    write_scored(xs, buf);
    ExampleReader reader(buf, &builtin());
    std::vector<ScoredPair> back;
    while (auto p = reader.next_scored()) back.push_back(*p);
    CHECK(back == xs);

    std::istringstream bad(
        R"({"id":"a","src_lang":"en","tgt_lang":"fr","src":"x","tgt":"y","qe_score":1.2})");
    ExampleReader r2(bad);
    CHECK(error_of([&] { r2.next_scored(); }) == ErrorCode::kInvalidScore);
  }

  TEST_CASE("example reader rejects unknown languages and bad provenance") {
    std::istringstream a(R"({"id":"a","src_lang":"en","tgt_lang":"xx","src":"x","tgt":"y"})");
    ExampleReader ra(a, &builtin());
    CHECK(error_of([&] { ra.next(); }) == ErrorCode::kUnknownLanguage);
    std::istringstream b(
        R"({"id":"a","src_lang":"en","tgt_lang":"fr","src":"x","tgt":"y","provenance":"alien"})");
    ExampleReader rb(b);
    CHECK(error_of([&] { rb.next(); }) == ErrorCode::kParseError);
  }

  TEST_CASE("multi-way records round-trip") {
    std::vector<MultiWayRecord> xs{{"r1", {{"en", "a\tb"}, {"zh", "你好\n"}}}, {"r2", {{"fr", "x"}}}};
    std::stringstream buf;
    CHECK(write_multiway(xs, buf) == 2);
    CHECK(read_all_multiway(buf, builtin()) == xs);
  }

  TEST_CASE("monolingual segments") {
    std::istringstream in("{\"id\":\"m1\",\"lang\":\"en\",\"text\":\"Hi\"}\n\n{\"id\":\"m2\",\"lang\":\"zh\",\"text\":\"好\"}\n");
    const auto segs = read_all_mono(in);
    REQUIRE(segs.size() == 2);
    CHECK(segs[1].lang == "zh");
    CHECK(segs[1].text == "好");
  }

  TEST_CASE("write failure is an IoError") {
    std::ostringstream out;
    out.setstate(std::ios::badbit);
    std::vector<DirectionalExample> xs{ex("a", "en", "fr", "x", "y")};
    CHECK(error_of([&] { write_examples(xs, out); }) == ErrorCode::kIoError);
  }

  TEST_CASE("provenance names") {
    CHECK(to_string(Provenance::kSynthPivot) == "synth_pivot");
    CHECK(parse_provenance("synth_direct") == Provenance::kSynthDirect);
    CHECK(error_of([] { parse_provenance("bot"); }) == ErrorCode::kInvalidArgument);
  }
}
