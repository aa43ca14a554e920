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

// Stand-in for external scorer / translation processes in tests.
//
//   fake_worker score                 qe_score derived from the id hash
//   fake_worker translate MODE [N]    MODE: identity | upper | tag | fail-every
//   fake_worker bad-json | wrong-id | die-after N
#include <cctype>
#include <cstdlib>
#include <iostream>
#include <string>

#include <json.hpp>

#include "lmtkit/downsample.hpp"

namespace {

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) return 64;
  const std::string role = argv[1];
  const std::string mode = argc > 2 ? argv[2] : "identity";
  const long n = argc > 3 ? std::atol(argv[3]) : (argc > 2 ? std::atol(argv[2]) : 0);

  std::string line;
  long count = 0;
  while (std::getline(std::cin, line)) {
    ++count;
    const auto req = nlohmann::json::parse(line);
    const auto id = req.at("id").get<std::string>();
    nlohmann::ordered_json rep;
    rep["id"] = id;
    if (role == "score") {
      rep["qe_score"] = static_cast<double>(lmt::fnv1a64(id) % 1001) / 1000.0;
    } else if (role == "translate") {
      const auto text = req.at("text").get<std::string>();
      if (mode == "fail-every" && n > 0 && count % n == 0) {
        rep["error"] = "simulated failure";
      } else if (mode == "upper") {
        rep["text"] = upper(text);
      } else if (mode == "tag") {
        rep["text"] = "<" + req.at("tgt_lang").get<std::string>() + "> " + text;
      } else {
        rep["text"] = text;
      }
    } else if (role == "bad-json") {
      std::cout << "not json" << std::endl;
      continue;
    } else if (role == "wrong-id") {
      rep["id"] = id + "-other";
      rep["qe_score"] = 0.5;
      rep["text"] = "x";
    } else if (role == "die-after") {
      if (count > n) return 3;
      rep["qe_score"] = 0.5;
      rep["text"] = "x";
    } else {
      return 64;
    }
    std::cout << rep.dump() << std::endl;
  }
  return 0;
}
