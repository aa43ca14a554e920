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
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/subprocess.hpp"

namespace lmt {

/// Heuristic cleaning rule. Lengths are whitespace tokens, or code points for
/// scriptio-continua languages (see text::is_scriptio_continua).
struct FilterRule {
  enum class Kind {
    kMaxLengthRatio,   // longer/shorter side, in token equivalents, <= ratio
    kLengthBounds,     // min <= length <= max on both sides
    kNonEmpty,         // both sides contain a non-whitespace character
    kSrcTgtDistinct,   // src != tgt
    kControlCharFree,  // no C0 control except \t and \n
    kExactDedup,       // first occurrence of (src_lang, tgt_lang, src, tgt) wins
  };

  Kind kind = Kind::kNonEmpty;
  double ratio = 3.0;
  std::size_t min_length = 1;
  std::size_t max_length = 512;

  static FilterRule max_length_ratio(double r);
  static FilterRule length_bounds(std::size_t min, std::size_t max);
  static FilterRule non_empty() { return {Kind::kNonEmpty}; }
  static FilterRule src_tgt_distinct() { return {Kind::kSrcTgtDistinct}; }
  static FilterRule control_char_free() { return {Kind::kControlCharFree}; }
  static FilterRule exact_dedup() { return {Kind::kExactDedup}; }

  /// Stable rule name ("max_length_ratio", "length_bounds", ...).
  std::string name() const;
  /// Throws InvalidArgument on r <= 0 or bounds outside 0 < min <= max.
  void validate() const;
};

/// The documented defaults: NonEmpty, ControlCharFree, SrcTgtDistinct,
/// LengthBounds(1, 512), MaxLengthRatio(3.0), ExactDedup.
std::vector<FilterRule> default_rules();

/// [{"kind":"max_length_ratio","ratio":3.0}, {"kind":"length_bounds","min":1,
/// "max":512}, {"kind":"non_empty"}, ...]
std::vector<FilterRule> parse_rules(std::istream& in);

/// Length used by the length rules: whitespace tokens, or code points for
/// scriptio-continua languages.
std::size_t length_units(std::string_view text, std::string_view lang);

struct ThresholdBin {
  double tau = 0.0;
  std::size_t count = 0;
  double proportion = 0.0;

  friend bool operator==(const ThresholdBin&, const ThresholdBin&) = default;
};

struct FilterReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  /// Every configured rule appears, including zero counts.
  std::map<std::string, std::size_t> rejected;
  /// Pairs counted by `histogram`; proportions are count / scored.
  std::size_t scored = 0;
  std::vector<ThresholdBin> histogram;

  std::size_t rejected_total() const;
  /// Associative merge of two shard reports over the same rules.
  FilterReport& operator+=(const FilterReport& other);
  std::string to_json() const;
};

/// Stateful streaming filter: a pair is rejected by the first failing rule in
/// the configured order.
class HeuristicFilter {
 public:
  /// Throws InvalidArgument on an empty or invalid rule list.
  explicit HeuristicFilter(std::vector<FilterRule> rules);

  /// Returns the name of the rejecting rule, or nullopt when the pair is kept.
  std::optional<std::string> check(const DirectionalExample& pair);
  bool accept(const DirectionalExample& pair) { return !check(pair).has_value(); }

  const FilterReport& report() const { return report_; }
  const std::vector<FilterRule>& rules() const { return rules_; }

 private:
  bool passes(const FilterRule& rule, const DirectionalExample& pair);

  std::vector<FilterRule> rules_;
  FilterReport report_;
  std::unordered_set<std::string> seen_;
};

struct HeuristicResult {
  std::vector<DirectionalExample> kept;
  FilterReport report;
};

HeuristicResult apply_heuristics(std::span<const DirectionalExample> pairs,
                                 std::vector<FilterRule> rules);

/// id -> qe_score. Loads {"id","qe_score"} lines; *.sjsonl files qualify since
/// they carry both fields.
class ScoreSidecar {
 public:
  ScoreSidecar() = default;
  /// Throws ParseError, InvalidScore (outside [0,1]) or DuplicateRecord.
  static ScoreSidecar load(std::istream& in);
  static ScoreSidecar load_file(const std::string& path);

  /// Throws InvalidScore or DuplicateRecord.
  void insert(std::string id, double score);
  std::optional<double> find(std::string_view id) const;
  /// Throws MissingScore.
  double at(std::string_view id) const;
  std::size_t size() const { return scores_.size(); }

 private:
  std::unordered_map<std::string, double> scores_;
};

/// Throws MissingScore for the first pair without a score.
std::vector<ScoredPair> attach_scores(std::span<const DirectionalExample> pairs,
                                      const ScoreSidecar& sidecar);

/// Keeps pairs with qe_score >= tau. Throws InvalidArgument unless 0 <= tau <= 1.
std::vector<ScoredPair> threshold_filter(std::span<const ScoredPair> scored, double tau);

inline constexpr double kDefaultSelectionThreshold = 0.70;

/// Count and proportion of pairs with score >= tau for each threshold.
/// Thresholds must be ascending. Proportions are 0 for empty input.
std::vector<ThresholdBin> score_histogram(std::span<const double> scores,
                                          std::span<const double> thresholds);
std::vector<ThresholdBin> score_histogram(std::span<const ScoredPair> scored,
                                          std::span<const double> thresholds);

inline constexpr double kDefaultThresholds[] = {0.6, 0.7, 0.8};

/// Client for an external QE scorer process. Per pair it writes
/// {"id","src_lang","tgt_lang","src","tgt"} and expects {"id","qe_score"}
/// back, in order.
class ExternalScorer {
 public:
  explicit ExternalScorer(const std::string& command);
  ~ExternalScorer();
  ExternalScorer(const ExternalScorer&) = delete;
  ExternalScorer& operator=(const ExternalScorer&) = delete;

  /// Throws ProtocolError (malformed or mismatched reply) or InvalidScore.
  double score(const DirectionalExample& pair);

 private:
  std::unique_ptr<LineProcess> process_;
};

std::vector<ScoredPair> score_with_command(std::span<const DirectionalExample> pairs,
                                           const std::string& command);

}  // namespace lmt
