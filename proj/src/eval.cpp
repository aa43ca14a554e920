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

#include "lmtkit/eval.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>
#include <map>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "lmtkit/error.hpp"

namespace lmt {

std::string_view to_string(Metric m) {
  return m == Metric::kComet22 ? "comet22" : "sacrebleu";
}

Metric parse_metric(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "comet22" || s == "comet-22" || s == "comet") return Metric::kComet22;
  if (s == "sacrebleu" || s == "bleu") return Metric::kSacreBleu;
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + std::string(text) + "'");
}

std::vector<EvalRecord> read_eval_records(std::istream& in, const Registry& registry) {
  std::vector<EvalRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      EvalRecord r;
      r.model = j.at("model").get<std::string>();
      r.direction = {j.at("src").get<std::string>(), j.at("tgt").get<std::string>()};
      r.metric = parse_metric(j.at("metric").get<std::string>());
      r.value = j.at("value").get<double>();
      registry.at(r.direction.src);
      registry.at(r.direction.tgt);
      if (r.model.empty()) throw Error(ErrorCode::kInvalidRecord, "empty model name");
      if (!(r.value >= 0.0 && r.value <= 100.0)) {
        throw Error(ErrorCode::kInvalidRecord, "metric value " + std::to_string(r.value) +
                                                   " outside [0,100]");
      }
      if (r.direction.src == r.direction.tgt || !r.direction.is_centric()) {
        throw Error(ErrorCode::kInvalidRecord, "direction " + r.direction.key() +
                                                   " has no center language");
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, e.what(), n);
    } catch (const Error& e) {
      if (e.line()) throw;
      throw Error(e.code(), e.detail(), n);
    }
  }
  return out;
}

std::string Support::descriptor() const {
  return std::to_string(languages.size()) + " (" + std::to_string(tiers.high) + "/" +
         std::to_string(tiers.medium) + "/" + std::to_string(tiers.low) + ")";
}

Support intersect_support(const std::set<std::string>& a, const std::set<std::string>& b,
                          const Registry& registry) {
  for (const auto* s : {&a, &b}) {
    for (const auto& code : *s) registry.at(code);
  }
  Support out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out.languages, out.languages.end()));
  for (const auto& code : out.languages) ++out.tiers[registry.tier_of(code)];
  return out;
}

std::string_view to_string(TableClass c) {
  switch (c) {
    case TableClass::kEnToX: return "En→X";
    case TableClass::kXToEn: return "X→En";
    case TableClass::kZhToX: return "Zh→X";
    case TableClass::kXToZh: return "X→Zh";
  }
  return "En→X";
}

std::vector<std::pair<TableClass, std::string>> table_placements(const Direction& d) {
  std::vector<std::pair<TableClass, std::string>> out;
  if (d.src == kEnglish) out.emplace_back(TableClass::kEnToX, d.tgt);
  if (d.tgt == kEnglish) out.emplace_back(TableClass::kXToEn, d.src);
  if (d.src == kChinese) out.emplace_back(TableClass::kZhToX, d.tgt);
  if (d.tgt == kChinese) out.emplace_back(TableClass::kXToZh, d.src);
  return out;
}

std::optional<double> TierCell::mean() const {
  if (values.empty()) return std::nullopt;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const long double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0L);
  return static_cast<double>(sum / static_cast<long double>(sorted.size()));
}

const TierRow* TierTable::row(std::string_view model) const {
  for (const auto& r : rows) {
    if (r.model == model) return &r;
  }
  return nullptr;
}

std::optional<double> TierTable::mean(std::string_view model, Tier t, TableClass c) const {
  const auto* r = row(model);
  return r ? r->cell(t, c).mean() : std::nullopt;
}

TierTable aggregate(std::span<const EvalRecord> records, const Registry& registry,
                    const Support& overlap, const AggregateOptions& options) {
  TierTable table;
  table.metric = options.metric;
  table.support = overlap;

  std::unordered_set<std::string> seen;
  std::map<std::string, TierRow> rows;
  for (const auto& r : records) {
    if (!r.direction.is_centric() || r.direction.src == r.direction.tgt) {
      throw Error(ErrorCode::kInvalidRecord, "direction " + r.direction.key() +
                                                 " has no center language");
    }
    const auto key = r.model + '\n' + r.direction.key() + '\n' + std::string(to_string(r.metric));
    if (!seen.insert(key).second) {
      throw Error(ErrorCode::kDuplicateRecord, "duplicate record for model '" + r.model + "', " +
                                                   r.direction.key() + ", " +
                                                   std::string(to_string(r.metric)));
    }
    if (r.metric != options.metric) continue;
    if (!options.models.empty() &&
        std::find(options.models.begin(), options.models.end(), r.model) == options.models.end()) {
      continue;
    }
    if (!overlap.languages.count(r.direction.src) || !overlap.languages.count(r.direction.tgt)) {
      continue;
    }
    const bool center_pair = is_center(r.direction.src) && is_center(r.direction.tgt);
    if (center_pair && !options.include_center_pairs) continue;
    auto& row = rows[r.model];
    row.model = r.model;
    for (const auto& [cls, x] : table_placements(r.direction)) {
      const Tier tier = registry.tier_of(x);
      row.cells[static_cast<int>(tier)][static_cast<int>(cls)].values.push_back(r.value);
    }
  }

  if (options.models.empty()) {
    for (auto& [name, row] : rows) table.rows.push_back(std::move(row));
  } else {
    for (const auto& name : options.models) {
      auto it = rows.find(name);
      TierRow row;
      row.model = name;
      table.rows.push_back(it == rows.end() ? std::move(row) : std::move(it->second));
    }
  }
  return table;
}

TableFormat parse_table_format(std::string_view text) {
  if (text == "markdown" || text == "md") return TableFormat::kMarkdown;
  if (text == "csv") return TableFormat::kCsv;
  throw Error(ErrorCode::kInvalidArgument, "unknown table format '" + std::string(text) + "'");
}

namespace {

std::string format_value(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string csv_class(TableClass c) {
  switch (c) {
    case TableClass::kEnToX: return "en2x";
    case TableClass::kXToEn: return "x2en";
    case TableClass::kZhToX: return "zh2x";
    case TableClass::kXToZh: return "x2zh";
  }
  return "en2x";
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::string render_table(const TierTable& table, TableFormat format) {
  std::vector<std::string> header;
  if (format == TableFormat::kCsv) {
    header = {"model", "support"};
  } else {
    header = {"Model", "Support"};
  }
  for (Tier t : kTiers) {
    for (TableClass c : kTableClasses) {
      if (format == TableFormat::kCsv) {
        header.push_back(lower(to_string(t)) + "_" + csv_class(c));
      } else {
        header.push_back(std::string(to_string(t)) + " " + std::string(to_string(c)));
      }
    }
  }
  std::vector<std::vector<std::string>> body;
  for (const auto& row : table.rows) {
    std::vector<std::string> cells{row.model, table.support.descriptor()};
    for (Tier t : kTiers) {
      for (TableClass c : kTableClasses) cells.push_back(format_value(row.cell(t, c).mean()));
    }
    body.push_back(std::move(cells));
  }

  std::string out;
  if (format == TableFormat::kCsv) {
    auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += csv_field(cells[i]);
      }
      out += '\n';
    };
    emit(header);
    for (const auto& r : body) emit(r);
    return out;
  }
  auto emit = [&](const std::vector<std::string>& cells) {
    out += '|';
    for (const auto& c : cells) {
      out += ' ';
      out += c;
      out += " |";
    }
    out += '\n';
  };
  emit(header);
  out += "|---|---|";
  for (std::size_t i = 2; i < header.size(); ++i) out += "---:|";
  out += '\n';
  for (const auto& r : body) emit(r);
  return out;
}

}  // namespace lmt
