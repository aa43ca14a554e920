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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/error.hpp"
#include "lmtkit/registry.hpp"

namespace testing {

inline const lmt::Registry& builtin() { return lmt::Registry::builtin(); }

inline lmt::DirectionalExample ex(std::string id, std::string s, std::string t, std::string src,
                                  std::string tgt) {
  return {std::move(id), std::move(s), std::move(t), std::move(src), std::move(tgt),
          lmt::Provenance::kHuman};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("lmtkit-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

/// A record covering every language in `codes` with distinct sentences.
inline lmt::MultiWayRecord full_record(const std::string& id, const std::vector<std::string>& codes) {
  lmt::MultiWayRecord r{id, {}};
  for (const auto& c : codes) r.sentences[c] = c + " sentence " + id;
  return r;
}

inline std::vector<std::string> builtin_codes() {
  std::vector<std::string> out;
  for (const auto& l : builtin().languages()) out.push_back(l.code);
  return out;
}

template <typename F>
lmt::ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const lmt::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an lmt::Error");
}

}  // namespace testing
