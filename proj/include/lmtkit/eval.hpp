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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmtkit/language.hpp"
#include "lmtkit/registry.hpp"

namespace lmt {

enum class Metric { kComet22, kSacreBleu };

/// "comet22" / "sacrebleu".
std::string_view to_string(Metric m);
/// Accepts "comet22", "comet-22", "comet", "sacrebleu", "bleu" in any case.
Metric parse_metric(std::string_view text);

struct EvalRecord {
  std::string model;
  Direction direction;
  Metric metric = Metric::kComet22;
  double value = 0.0;
};

/// {"model","src","tgt","metric","value"} per line. Throws ParseError,
/// UnknownLanguage, or InvalidRecord (value outside [0,100], non-centric or
/// degenerate direction), each carrying the line number.
std::vector<EvalRecord> read_eval_records(std::istream& in, const Registry& registry);

struct Support {
  std::set<std::string> languages;
  TierCounts tiers;

  /// "59 (13/18/28)".
  std::string descriptor() const;
};

/// Intersection of two language sets with its tier distribution. Throws
/// UnknownLanguage for codes outside the registry.
Support intersect_support(const std::set<std::string>& a, const std::set<std::string>& b,
                          const Registry& registry);

/// Column classes of a tier table, in rendering order.
enum class TableClass { kEnToX, kXToEn, kZhToX, kXToZh };
inline constexpr std::array<TableClass, 4> kTableClasses = {
    TableClass::kEnToX, TableClass::kXToEn, TableClass::kZhToX, TableClass::kXToZh};
inline constexpr std::array<Tier, 3> kTiers = {Tier::kHigh, Tier::kMedium, Tier::kLow};

/// "En→X", "X→En", "Zh→X", "X→Zh".
std::string_view to_string(TableClass c);

/// A direction's placements as (class, X). Usually one; en->zh and zh->en
/// have two since either center can play X (en->zh is En->X with X = zh and
/// X->Zh with X = en).
std::vector<std::pair<TableClass, std::string>> table_placements(const Direction& d);

struct TierCell {
  std::vector<double> values;

  bool empty() const { return values.empty(); }
  /// Unweighted mean, or nullopt for an empty cell. Summed in sorted order so
  /// the result does not depend on record order.
  std::optional<double> mean() const;
};

struct TierRow {
  std::string model;
  /// cells[tier][class]
  std::array<std::array<TierCell, 4>, 3> cells;

  const TierCell& cell(Tier t, TableClass c) const {
    return cells[static_cast<int>(t)][static_cast<int>(c)];
  }
};

struct TierTable {
  Metric metric = Metric::kComet22;
  Support support;
  std::vector<TierRow> rows;

  const TierRow* row(std::string_view model) const;
  /// Convenience: mean of one cell, nullopt if the model or cell is absent.
  std::optional<double> mean(std::string_view model, Tier t, TableClass c) const;
};

struct AggregateOptions {
  Metric metric = Metric::kComet22;
  /// Rows to produce, in this order. Empty means every model, sorted by name.
  std::vector<std::string> models;
  /// Whether en<->zh feeds the X classes (as X = the other center).
  bool include_center_pairs = true;
};

/// Averages records of `options.metric` into tier x class cells. A record is
/// used only when both its languages lie in the overlap; the tier is that of
/// X. Throws DuplicateRecord for a repeated (model, direction, metric) and
/// InvalidRecord for non-centric directions.
TierTable aggregate(std::span<const EvalRecord> records, const Registry& registry,
                    const Support& overlap, const AggregateOptions& options = {});

enum class TableFormat { kMarkdown, kCsv };
TableFormat parse_table_format(std::string_view text);

/// Model, support, then 12 value columns (tiers High/Medium/Low, each with
/// En→X, X→En, Zh→X, X→Zh), two decimals, "-" for absent cells.
std::string render_table(const TierTable& table, TableFormat format);

}  // namespace lmt
