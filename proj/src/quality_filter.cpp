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

#include "lmtkit/quality_filter.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>

#include <json.hpp>

#include "lmtkit/error.hpp"
#include "lmtkit/text.hpp"

namespace lmt {

FilterRule FilterRule::max_length_ratio(double r) {
  FilterRule rule{Kind::kMaxLengthRatio};
  rule.ratio = r;
  return rule;
}

FilterRule FilterRule::length_bounds(std::size_t min, std::size_t max) {
  FilterRule rule{Kind::kLengthBounds};
  rule.min_length = min;
  rule.max_length = max;
  return rule;
}

std::string FilterRule::name() const {
  switch (kind) {
    case Kind::kMaxLengthRatio: return "max_length_ratio";
    case Kind::kLengthBounds: return "length_bounds";
    case Kind::kNonEmpty: return "non_empty";
    case Kind::kSrcTgtDistinct: return "src_tgt_distinct";
    case Kind::kControlCharFree: return "control_char_free";
    case Kind::kExactDedup: return "exact_dedup";
  }
  return "unknown";
}

void FilterRule::validate() const {
  if (kind == Kind::kMaxLengthRatio && !(ratio > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "max_length_ratio needs ratio > 0");
  }
  if (kind == Kind::kLengthBounds && (min_length == 0 || min_length > max_length)) {
    throw Error(ErrorCode::kInvalidArgument, "length_bounds needs 0 < min <= max");
  }
}

std::vector<FilterRule> default_rules() {
  return {FilterRule::non_empty(),         FilterRule::control_char_free(),
          FilterRule::src_tgt_distinct(),  FilterRule::length_bounds(1, 512),
          FilterRule::max_length_ratio(3.0), FilterRule::exact_dedup()};
}

std::vector<FilterRule> parse_rules(std::istream& in) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!j.is_array()) throw Error(ErrorCode::kParseError, "rules file must hold a JSON array");
  std::vector<FilterRule> rules;
  for (const auto& item : j) {
    try {
      const auto kind = item.at("kind").get<std::string>();
      FilterRule rule;
      if (kind == "max_length_ratio") {
        rule = FilterRule::max_length_ratio(item.value("ratio", 3.0));
      } else if (kind == "length_bounds") {
        rule = FilterRule::length_bounds(item.value("min", std::size_t{1}),
                                         item.value("max", std::size_t{512}));
      } else if (kind == "non_empty") {
        rule = FilterRule::non_empty();
      } else if (kind == "src_tgt_distinct") {
        rule = FilterRule::src_tgt_distinct();
      } else if (kind == "control_char_free") {
        rule = FilterRule::control_char_free();
      } else if (kind == "exact_dedup") {
        rule = FilterRule::exact_dedup();
      } else {
        throw Error(ErrorCode::kParseError, "unknown rule kind '" + kind + "'");
      }
      rule.validate();
      rules.push_back(rule);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, e.what());
    }
  }
  return rules;
}

std::size_t length_units(std::string_view text, std::string_view lang) {
  return text::is_scriptio_continua(lang) ? text::codepoint_count(text)
                                          : text::whitespace_token_count(text);
}

namespace {

// Token equivalents: a scriptio-continua side counts four code points per
// token.
double token_equivalents(std::string_view text, std::string_view lang) {
  const auto n = static_cast<double>(length_units(text, lang));
  return text::is_scriptio_continua(lang) ? n / 4.0 : n;
}

bool within_bounds(std::string_view text, std::string_view lang, const FilterRule& rule) {
  const std::size_t n = length_units(text, lang);
  const std::size_t max =
      text::is_scriptio_continua(lang) ? rule.max_length * 4 : rule.max_length;
  return n >= rule.min_length && n <= max;
}

bool has_visible(std::string_view s) {
  return s.find_first_not_of(" \t\n\r\v\f") != std::string_view::npos;
}

std::string dedup_key(const DirectionalExample& p) {
  std::string key;
  for (const auto* part : {&p.src_lang, &p.tgt_lang, &p.src, &p.tgt}) {
    key += std::to_string(part->size());
    key += ':';
    key += *part;
  }
  return key;
}

}  // namespace

std::size_t FilterReport::rejected_total() const {
  std::size_t n = 0;
  for (const auto& [_, c] : rejected) n += c;
  return n;
}

FilterReport& FilterReport::operator+=(const FilterReport& other) {
  input += other.input;
  kept += other.kept;
  for (const auto& [rule, c] : other.rejected) rejected[rule] += c;
  if (histogram.empty()) {
    histogram = other.histogram;
  } else if (!other.histogram.empty()) {
    if (histogram.size() != other.histogram.size()) {
      throw Error(ErrorCode::kInvalidArgument, "cannot merge histograms over different thresholds");
    }
    for (std::size_t i = 0; i < histogram.size(); ++i) {
      histogram[i].count += other.histogram[i].count;
    }
  }
  scored += other.scored;
  for (auto& bin : histogram) {
    bin.proportion =
        scored == 0 ? 0.0 : static_cast<double>(bin.count) / static_cast<double>(scored);
  }
  return *this;
}

std::string FilterReport::to_json() const {
  nlohmann::ordered_json j;
  j["input"] = input;
  j["kept"] = kept;
  j["scored"] = scored;
  j["rejected"] = nlohmann::ordered_json::object();
  for (const auto& [rule, c] : rejected) j["rejected"][rule] = c;
  j["histogram"] = nlohmann::ordered_json::array();
  for (const auto& bin : histogram) {
    j["histogram"].push_back({{"tau", bin.tau}, {"count", bin.count}, {"proportion", bin.proportion}});
  }
  return j.dump(2);
}

HeuristicFilter::HeuristicFilter(std::vector<FilterRule> rules) : rules_(std::move(rules)) {
  if (rules_.empty()) throw Error(ErrorCode::kInvalidArgument, "at least one filter rule is required");
  for (const auto& r : rules_) {
    r.validate();
    report_.rejected.emplace(r.name(), 0);
  }
}

bool HeuristicFilter::passes(const FilterRule& rule, const DirectionalExample& p) {
  switch (rule.kind) {
    case FilterRule::Kind::kNonEmpty:
      return has_visible(p.src) && has_visible(p.tgt);
    case FilterRule::Kind::kSrcTgtDistinct:
      return p.src != p.tgt;
    case FilterRule::Kind::kControlCharFree:
      return !text::has_c0_control(p.src) && !text::has_c0_control(p.tgt);
    case FilterRule::Kind::kLengthBounds:
      return within_bounds(p.src, p.src_lang, rule) && within_bounds(p.tgt, p.tgt_lang, rule);
    case FilterRule::Kind::kMaxLengthRatio: {
      const double a = token_equivalents(p.src, p.src_lang);
      const double b = token_equivalents(p.tgt, p.tgt_lang);
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      if (lo == 0.0) return hi == 0.0;
      return hi / lo <= rule.ratio;
    }
    case FilterRule::Kind::kExactDedup:
      return seen_.insert(dedup_key(p)).second;
  }
  return true;
}

std::optional<std::string> HeuristicFilter::check(const DirectionalExample& pair) {
  ++report_.input;
  for (const auto& rule : rules_) {
    if (!passes(rule, pair)) {
      auto name = rule.name();
      ++report_.rejected[name];
      return name;
    }
  }
  ++report_.kept;
  return std::nullopt;
}

HeuristicResult apply_heuristics(std::span<const DirectionalExample> pairs,
                                 std::vector<FilterRule> rules) {
  HeuristicFilter filter(std::move(rules));
  HeuristicResult result;
  for (const auto& p : pairs) {
    if (filter.accept(p)) result.kept.push_back(p);
  }
  result.report = filter.report();
  return result;
}

ScoreSidecar ScoreSidecar::load(std::istream& in) {
  ScoreSidecar sidecar;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::kParseError, e.what(), line);
    }
    auto id = j.find("id");
    auto score = j.find("qe_score");
    if (!j.is_object() || id == j.end() || !id->is_string() || score == j.end() ||
        !score->is_number()) {
      throw Error(ErrorCode::kParseError, "expected {\"id\": string, \"qe_score\": number}", line);
    }
    try {
      sidecar.insert(id->get<std::string>(), score->get<double>());
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), line);
    }
  }
  return sidecar;
}

ScoreSidecar ScoreSidecar::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open score file '" + path + "'");
  return load(in);
}

void ScoreSidecar::insert(std::string id, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::kInvalidScore,
                "score " + std::to_string(score) + " for '" + id + "' is outside [0,1]");
  }
  auto [it, inserted] = scores_.emplace(std::move(id), score);
  if (!inserted) throw Error(ErrorCode::kDuplicateRecord, "duplicate score for '" + it->first + "'");
}

std::optional<double> ScoreSidecar::find(std::string_view id) const {
  auto it = scores_.find(std::string(id));
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

double ScoreSidecar::at(std::string_view id) const {
  auto s = find(id);
  if (!s) throw Error(ErrorCode::kMissingScore, "no score for '" + std::string(id) + "'");
  return *s;
}

std::vector<ScoredPair> attach_scores(std::span<const DirectionalExample> pairs,
                                      const ScoreSidecar& sidecar) {
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p, sidecar.at(p.id)});
  return out;
}

std::vector<ScoredPair> threshold_filter(std::span<const ScoredPair> scored, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in [0,1]");
  }
  std::vector<ScoredPair> out;
  std::copy_if(scored.begin(), scored.end(), std::back_inserter(out),
               [tau](const ScoredPair& p) { return p.qe_score >= tau; });
  return out;
}

std::vector<ThresholdBin> score_histogram(std::span<const double> scores,
                                          std::span<const double> thresholds) {
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw Error(ErrorCode::kInvalidArgument, "thresholds must be sorted ascending");
  }
  std::vector<ThresholdBin> bins;
  for (double tau : thresholds) bins.push_back({tau, 0, 0.0});
  for (double s : scores) {
    for (auto& bin : bins) {
      if (s < bin.tau) break;
      ++bin.count;
    }
  }
  if (!scores.empty()) {
    for (auto& bin : bins) {
      bin.proportion = static_cast<double>(bin.count) / static_cast<double>(scores.size());
    }
  }
  return bins;
}

std::vector<ThresholdBin> score_histogram(std::span<const ScoredPair> scored,
                                          std::span<const double> thresholds) {
  std::vector<double> scores;
  scores.reserve(scored.size());
  for (const auto& p : scored) scores.push_back(p.qe_score);
  return score_histogram(std::span<const double>(scores), thresholds);
}

ExternalScorer::ExternalScorer(const std::string& command)
    : process_(std::make_unique<LineProcess>(command)) {}

ExternalScorer::~ExternalScorer() = default;

double ExternalScorer::score(const DirectionalExample& pair) {
  nlohmann::ordered_json request;
  request["id"] = pair.id;
  request["src_lang"] = pair.src_lang;
  request["tgt_lang"] = pair.tgt_lang;
  request["src"] = pair.src;
  request["tgt"] = pair.tgt;
  const auto reply = process_->exchange(request.dump());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kProtocolError, std::string("scorer reply is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("id") || !j["id"].is_string() || !j.contains("qe_score") ||
      !j["qe_score"].is_number()) {
    throw Error(ErrorCode::kProtocolError, "scorer reply must be {\"id\", \"qe_score\"}");
  }
  if (j["id"].get<std::string>() != pair.id) {
    throw Error(ErrorCode::kProtocolError, "scorer replied for '" + j["id"].get<std::string>() +
                                               "' while '" + pair.id + "' was pending");
  }
  const double score = j["qe_score"].get<double>();
  if (!(score >= 0.0 && score <= 1.0)) {
    throw Error(ErrorCode::kInvalidScore, "scorer returned " + std::to_string(score) + " for '" +
                                              pair.id + "'");
  }
  return score;
}

std::vector<ScoredPair> score_with_command(std::span<const DirectionalExample> pairs,
                                           const std::string& command) {
  ExternalScorer scorer(command);
  std::vector<ScoredPair> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back({p, scorer.score(p)});
  return out;
}

}  // namespace lmt
