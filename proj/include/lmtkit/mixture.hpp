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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lmtkit/corpus_io.hpp"
#include "lmtkit/direction.hpp"
#include "lmtkit/downsample.hpp"
#include "lmtkit/prompt.hpp"

namespace lmt {

class Registry;
class ScoreSidecar;

struct MixtureSpec {
  std::size_t per_direction_min = 3000;
  std::size_t per_direction_max = 20000;
  double forward_pmp_share = 0.5;
  double reverse_total_retention = 0.05;
  double reverse_pmp_share_of_retained = 0.5;
  std::uint64_t seed = 42;

  /// Throws InvalidArgument.
  void validate() const;
  /// Missing keys keep their defaults.
  static MixtureSpec from_json(std::istream& in);
  std::string to_json() const;
};

struct DirectionMixtureStats {
  Direction direction;
  DirectionClass cls = DirectionClass::kForward;
  std::size_t supply = 0;
  std::size_t selected = 0;
  std::size_t retained = 0;
  std::size_t stp = 0;
  std::size_t pmp = 0;
  /// Examples that fell back to STP because the record lacked the auxiliary
  /// sentence.
  std::size_t missing_auxiliary = 0;
};

struct MixtureWarning {
  Direction direction;
  std::string message;
};

struct MixtureResult {
  /// Grouped by direction in DirectionSet order, by id within a direction.
  std::vector<PromptedExample> examples;
  std::vector<DirectionMixtureStats> stats;
  std::vector<MixtureWarning> warnings;
};

/// Builds the SFT mixture record by record. Each direction keeps at most
/// per_direction_max candidates (best scores first when a score sidecar is
/// given, ties broken by ascending id; corpus order otherwise), so memory is
/// bounded by the spec rather than the corpus length.
///
/// At finish(): reverse directions are thinned with the strategic-downsampling
/// rule at reverse_total_retention; survivors become PMP with probability
/// forward_pmp_share (forward) or reverse_pmp_share_of_retained (reverse),
/// drawn from seeded_uniform(seed, "pmp:" + id). Directions without an
/// auxiliary language, and records missing the auxiliary sentence, fall back
/// to STP.
class MixtureBuilder {
 public:
  MixtureBuilder(const Registry& registry, const DirectionSet& dirset, MixtureSpec spec,
                 const ScoreSidecar* scores = nullptr);

  /// Throws MissingScore when a sidecar is set and lacks an example id.
  void add(const MultiWayRecord& record);
  MixtureResult finish(std::size_t workers = 1);

 private:
  struct Candidate {
    std::string id;
    std::string src;
    std::string tgt;
    std::optional<std::string> aux;
    double score = 0.0;
  };
  struct Pool {
    std::vector<Candidate> items;
    std::size_t supply = 0;
  };

  void offer(Pool& pool, Candidate candidate);

  const Registry& registry_;
  const DirectionSet& dirset_;
  MixtureSpec spec_;
  const ScoreSidecar* scores_;
  std::vector<std::optional<std::string>> aux_langs_;
  std::vector<Pool> pools_;
};

MixtureResult build_sft_mixture(std::span<const MultiWayRecord> records, const Registry& registry,
                                const DirectionSet& dirset, const MixtureSpec& spec,
                                const ScoreSidecar* scores = nullptr, std::size_t workers = 1);

}  // namespace lmt
