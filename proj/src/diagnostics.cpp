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

#include "lmtkit/diagnostics.hpp"

#include <algorithm>

#include <json.hpp>

#include "lmtkit/parallel.hpp"
#include "lmtkit/text.hpp"

namespace lmt {

namespace {

std::string key_of(std::string_view lang, std::string_view text) {
  std::string k(lang);
  k += '\n';
  k += text::nfc(text);
  return k;
}

std::string_view lang_of(const std::string& key) {
  return std::string_view(key).substr(0, key.find('\n'));
}

void fold(RepetitionSummary& s, std::size_t n) {
  ++s.targets;
  s.sources += n;
  s.max_repetition = std::max(s.max_repetition, n);
}

}  // namespace

void RepetitionStats::add(const DirectionalExample& e) {
  targets_[key_of(e.tgt_lang, e.tgt)].insert(key_of(e.src_lang, e.src));
}

void RepetitionStats::merge(const RepetitionStats& other) {
  for (const auto& [k, srcs] : other.targets_) targets_[k].insert(srcs.begin(), srcs.end());
}

std::size_t RepetitionStats::max_repetition() const {
  std::size_t m = 0;
  for (const auto& [k, srcs] : targets_) m = std::max(m, srcs.size());
  return m;
}

std::size_t RepetitionStats::repetition(std::string_view tgt_lang,
                                        std::string_view tgt_text) const {
  auto it = targets_.find(key_of(tgt_lang, tgt_text));
  return it == targets_.end() ? 0 : it->second.size();
}

std::map<std::size_t, std::size_t> RepetitionStats::histogram() const {
  std::map<std::size_t, std::size_t> h;
  for (const auto& [k, srcs] : targets_) ++h[srcs.size()];
  return h;
}

RepetitionSummary RepetitionStats::by_class(DirectionClass cls) const {
  RepetitionSummary s;
  for (const auto& [k, srcs] : targets_) {
    const bool reverse = is_center(lang_of(k));
    if (reverse == (cls == DirectionClass::kReverse)) fold(s, srcs.size());
  }
  return s;
}

std::map<std::string, RepetitionSummary> RepetitionStats::by_target_language() const {
  std::map<std::string, RepetitionSummary> out;
  for (const auto& [k, srcs] : targets_) fold(out[std::string(lang_of(k))], srcs.size());
  return out;
}

RepetitionSummary RepetitionStats::for_target_language(std::string_view lang) const {
  RepetitionSummary s;
  for (const auto& [k, srcs] : targets_) {
    if (lang_of(k) == lang) fold(s, srcs.size());
  }
  return s;
}

std::string RepetitionStats::to_json() const {
  auto summary = [](const RepetitionSummary& s) {
    nlohmann::ordered_json j;
    j["targets"] = s.targets;
    j["sources"] = s.sources;
    j["max_repetition"] = s.max_repetition;
    j["mean_repetition"] = s.mean();
    return j;
  };
  nlohmann::ordered_json j;
  j["distinct_targets"] = distinct_targets();
  j["max_repetition"] = max_repetition();
  auto& hist = j["histogram"] = nlohmann::ordered_json::object();
  for (const auto& [rep, n] : histogram()) hist[std::to_string(rep)] = n;
  j["by_class"]["forward"] = summary(by_class(DirectionClass::kForward));
  j["by_class"]["reverse"] = summary(by_class(DirectionClass::kReverse));
  auto& langs = j["by_target_language"] = nlohmann::ordered_json::object();
  for (const auto& [lang, s] : by_target_language()) langs[lang] = summary(s);
  return j.dump(2);
}

std::string RepetitionStats::ascii_histogram(std::size_t width) const {
  const auto h = histogram();
  std::size_t peak = 0;
  std::size_t label = 1;
  for (const auto& [rep, n] : h) {
    peak = std::max(peak, n);
    label = std::max(label, std::to_string(rep).size());
  }
  std::string out;
  for (const auto& [rep, n] : h) {
    const auto r = std::to_string(rep);
    out.append(label - r.size(), ' ');
    out += r;
    out += " | ";
    const std::size_t bar = peak == 0 ? 0 : std::max<std::size_t>(1, n * width / peak);
    out.append(bar, '#');
    out += ' ';
    out += std::to_string(n);
    out += '\n';
  }
  return out;
}

RepetitionStats target_repetition_stats(std::span<const DirectionalExample> examples,
                                        std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, examples.size()));
  std::vector<RepetitionStats> shards(workers);
  const std::size_t block = workers == 0 ? 0 : (examples.size() + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    const std::size_t begin = std::min(examples.size(), w * block);
    const std::size_t end = std::min(examples.size(), begin + block);
    for (std::size_t i = begin; i < end; ++i) shards[w].add(examples[i]);
  });
  RepetitionStats out;
  for (const auto& s : shards) out.merge(s);
  return out;
}

RepetitionStats repetition_after_policy(std::span<const DirectionalExample> examples,
                                        const RetentionPolicy& policy, std::size_t workers) {
  const auto kept = downsample(examples, policy, nullptr, workers);
  return target_repetition_stats(kept, workers);
}

double thinned_mean_repetition(const RepetitionStats& before, const RepetitionStats& after,
                               std::string_view lang) {
  const auto b = before.for_target_language(lang);
  if (b.targets == 0) return 0.0;
  return static_cast<double>(after.for_target_language(lang).sources) /
         static_cast<double>(b.targets);
}

}  // namespace lmt
