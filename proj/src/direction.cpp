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

#include "lmtkit/direction.hpp"

#include "lmtkit/error.hpp"
#include "lmtkit/registry.hpp"

namespace lmt {

DirectionSet::DirectionSet(std::vector<Direction> directions)
    : directions_(std::move(directions)) {
  for (std::size_t i = 0; i < directions_.size(); ++i) {
    const auto& d = directions_[i];
    if (!d.is_centric()) {
      throw Error(ErrorCode::kInvalidArgument, "direction " + d.key() + " is not center-involving");
    }
    if (!index_.emplace(d.key(), i).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate direction " + d.key());
    }
  }
  for (const auto& d : directions_) {
    if (!contains(d.reversed())) {
      throw Error(ErrorCode::kInvalidArgument, "direction " + d.key() + " lacks its reverse");
    }
  }
}

std::optional<std::size_t> DirectionSet::index_of(const Direction& d) const {
  auto it = index_.find(d.key());
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DirectionSet enumerate_directions(const Registry& registry) {
  for (auto center : {kEnglish, kChinese}) {
    if (!registry.contains(center)) {
      throw Error(ErrorCode::kMissingCenter,
                  "registry lacks center language '" + std::string(center) + "'");
    }
  }
  std::vector<Direction> out;
  const std::string en(kEnglish);
  const std::string zh(kChinese);
  for (const auto& lang : registry.languages()) {
    if (lang.code == en) continue;
    out.push_back({en, lang.code});
    out.push_back({lang.code, en});
  }
  for (const auto& lang : registry.languages()) {
    if (is_center(lang.code)) continue;
    out.push_back({zh, lang.code});
    out.push_back({lang.code, zh});
  }
  return DirectionSet(std::move(out));
}

std::vector<DirectionalExample> expand(const MultiWayRecord& record, const DirectionSet& dirset) {
  std::vector<DirectionalExample> out;
  for (const auto& d : dirset.directions()) {
    const auto* src = record.sentence(d.src);
    const auto* tgt = record.sentence(d.tgt);
    if (src == nullptr || tgt == nullptr) continue;
    out.push_back({example_id(record.id, d), d.src, d.tgt, *src, *tgt, Provenance::kHuman});
  }
  return out;
}

}  // namespace lmt
