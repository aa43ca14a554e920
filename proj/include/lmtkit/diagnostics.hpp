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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/downsample.hpp"

namespace lmt {

/// Aggregate over a group of distinct targets.
struct RepetitionSummary {
  std::size_t targets = 0;
  /// Sum over targets of their distinct-source counts.
  std::size_t sources = 0;
  std::size_t max_repetition = 0;

  double mean() const {
    return targets == 0 ? 0.0 : static_cast<double>(sources) / static_cast<double>(targets);
  }
  friend bool operator==(const RepetitionSummary&, const RepetitionSummary&) = default;
};

/// How many distinct (src_lang, src_text) pairs map onto each identical
/// (tgt_lang, tgt_text). Texts are compared exactly after NFC. Shards merge
/// associatively.
class RepetitionStats {
 public:
  void add(const DirectionalExample& example);
  void merge(const RepetitionStats& other);

  std::size_t distinct_targets() const { return targets_.size(); }
  std::size_t max_repetition() const;
  /// Distinct-source count of one target; 0 when absent.
  std::size_t repetition(std::string_view tgt_lang, std::string_view tgt_text) const;
  /// repetition -> number of targets with that repetition.
  std::map<std::size_t, std::size_t> histogram() const;
  /// Targets grouped by the class of their direction (reverse iff the target
  /// language is a center).
  RepetitionSummary by_class(DirectionClass cls) const;
  std::map<std::string, RepetitionSummary> by_target_language() const;
  RepetitionSummary for_target_language(std::string_view lang) const;

  /// Pretty JSON report.
  std::string to_json() const;
  /// One bar per repetition value.
  std::string ascii_histogram(std::size_t width = 50) const;

  friend bool operator==(const RepetitionStats& a, const RepetitionStats& b) {
    return a.targets_ == b.targets_;
  }

 private:
  // key "<tgt_lang>\n<nfc tgt>" -> {"<src_lang>\n<nfc src>"}
  std::unordered_map<std::string, std::unordered_set<std::string>> targets_;
};

RepetitionStats target_repetition_stats(std::span<const DirectionalExample> examples,
                                        std::size_t workers = 1);

/// Same as target_repetition_stats(downsample(examples, policy)).
RepetitionStats repetition_after_policy(std::span<const DirectionalExample> examples,
                                        const RetentionPolicy& policy, std::size_t workers = 1);

/// Sources surviving per original target: after's total source count for
/// `lang` divided by before's target count. Binomial thinning puts this near
/// p times the unthinned mean.
double thinned_mean_repetition(const RepetitionStats& before, const RepetitionStats& after,
                               std::string_view lang);

}  // namespace lmt
