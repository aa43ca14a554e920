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

#include "lmtkit/mixture.hpp"

#include <algorithm>
#include <istream>

#include <json.hpp>

#include "lmtkit/error.hpp"
#include "lmtkit/parallel.hpp"
#include "lmtkit/quality_filter.hpp"
#include "lmtkit/registry.hpp"

namespace lmt {

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void MixtureSpec::validate() const {
  if (!is_probability(forward_pmp_share) || !is_probability(reverse_total_retention) ||
      !is_probability(reverse_pmp_share_of_retained)) {
    throw Error(ErrorCode::kInvalidArgument, "mixture probabilities must lie in [0,1]");
  }
  if (per_direction_min > per_direction_max) {
    throw Error(ErrorCode::kInvalidArgument, "per_direction_min exceeds per_direction_max");
  }
}

MixtureSpec MixtureSpec::from_json(std::istream& in) {
  MixtureSpec spec;
  try {
    const auto j = nlohmann::json::parse(in);
    if (!j.is_object()) throw Error(ErrorCode::kParseError, "mixture spec must be a JSON object");
    spec.per_direction_min = j.value("per_direction_min", spec.per_direction_min);
    spec.per_direction_max = j.value("per_direction_max", spec.per_direction_max);
    spec.forward_pmp_share = j.value("forward_pmp_share", spec.forward_pmp_share);
    spec.reverse_total_retention = j.value("reverse_total_retention", spec.reverse_total_retention);
    spec.reverse_pmp_share_of_retained =
        j.value("reverse_pmp_share_of_retained", spec.reverse_pmp_share_of_retained);
    spec.seed = j.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  spec.validate();
  return spec;
}

std::string MixtureSpec::to_json() const {
  nlohmann::ordered_json j;
  j["per_direction_min"] = per_direction_min;
  j["per_direction_max"] = per_direction_max;
  j["forward_pmp_share"] = forward_pmp_share;
  j["reverse_total_retention"] = reverse_total_retention;
  j["reverse_pmp_share_of_retained"] = reverse_pmp_share_of_retained;
  j["seed"] = seed;
  return j.dump();
}

namespace {

// Strict "better than" order for score-based selection.
template <typename C>
bool better(const C& a, const C& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.id < b.id;
}

}  // namespace

MixtureBuilder::MixtureBuilder(const Registry& registry, const DirectionSet& dirset,
                               MixtureSpec spec, const ScoreSidecar* scores)
    : registry_(registry), dirset_(dirset), spec_(spec), scores_(scores) {
  spec_.validate();
  pools_.resize(dirset_.direction_count());
  aux_langs_.reserve(dirset_.direction_count());
  for (const auto& d : dirset_.directions()) aux_langs_.push_back(registry_.auxiliary_for(d));
}

void MixtureBuilder::offer(Pool& pool, Candidate candidate) {
  ++pool.supply;
  const std::size_t cap = spec_.per_direction_max;
  if (cap == 0) return;
  auto& items = pool.items;
  auto cmp = [](const Candidate& a, const Candidate& b) { return better(a, b); };
  if (scores_ == nullptr) {
    if (items.size() < cap) items.push_back(std::move(candidate));
    return;
  }
  // Max-heap under `better` keeps the worst retained candidate on top.
  if (items.size() < cap) {
    items.push_back(std::move(candidate));
    std::push_heap(items.begin(), items.end(), cmp);
  } else if (better(candidate, items.front())) {
    std::pop_heap(items.begin(), items.end(), cmp);
    items.back() = std::move(candidate);
    std::push_heap(items.begin(), items.end(), cmp);
  }
}

void MixtureBuilder::add(const MultiWayRecord& record) {
  const auto& dirs = dirset_.directions();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto& d = dirs[i];
    const auto* src = record.sentence(d.src);
    const auto* tgt = record.sentence(d.tgt);
    if (src == nullptr || tgt == nullptr) continue;
    Candidate c;
    c.id = example_id(record.id, d);
    c.src = *src;
    c.tgt = *tgt;
    if (aux_langs_[i]) {
      if (const auto* aux = record.sentence(*aux_langs_[i])) c.aux = *aux;
    }
    if (scores_ != nullptr) c.score = scores_->at(c.id);
    offer(pools_[i], std::move(c));
  }
}

MixtureResult MixtureBuilder::finish(std::size_t workers) {
  const auto& dirs = dirset_.directions();
  std::vector<std::vector<PromptedExample>> per_direction(dirs.size());
  MixtureResult result;
  result.stats.resize(dirs.size());

  parallel_for(dirs.size(), workers, [&](std::size_t i) {
    const auto& d = dirs[i];
    auto& stats = result.stats[i];
    auto& pool = pools_[i];
    stats.direction = d;
    stats.cls = classify(d);
    stats.supply = pool.supply;
    stats.selected = pool.items.size();

    const bool reverse = stats.cls == DirectionClass::kReverse;
    const double pmp_share =
        reverse ? spec_.reverse_pmp_share_of_retained : spec_.forward_pmp_share;
    auto& out = per_direction[i];
    for (const auto& c : pool.items) {
      if (reverse && !seeded_below(spec_.seed, c.id, spec_.reverse_total_retention)) continue;
      ++stats.retained;
      DirectionalExample e{c.id, d.src, d.tgt, c.src, c.tgt, Provenance::kHuman};
      const bool wants_pmp = aux_langs_[i].has_value() &&
                             seeded_below(spec_.seed, "pmp:" + c.id, pmp_share);
      if (wants_pmp && c.aux) {
        out.push_back(render_pmp(e, *c.aux, *aux_langs_[i], registry_));
        ++stats.pmp;
      } else {
        if (wants_pmp) ++stats.missing_auxiliary;
        out.push_back(render_stp(e, registry_));
        ++stats.stp;
      }
    }
    std::sort(out.begin(), out.end(),
              [](const PromptedExample& a, const PromptedExample& b) { return a.id < b.id; });
    pool = Pool{};
  });

  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const auto& stats = result.stats[i];
    if (stats.supply == 0) {
      result.warnings.push_back({dirs[i], "no examples available"});
    } else if (stats.selected < spec_.per_direction_min) {
      result.warnings.push_back({dirs[i], "selected " + std::to_string(stats.selected) +
                                              " examples, below the minimum of " +
                                              std::to_string(spec_.per_direction_min)});
    }
    auto& chunk = per_direction[i];
    std::move(chunk.begin(), chunk.end(), std::back_inserter(result.examples));
  }
  return result;
}

MixtureResult build_sft_mixture(std::span<const MultiWayRecord> records, const Registry& registry,
                                const DirectionSet& dirset, const MixtureSpec& spec,
                                const ScoreSidecar* scores, std::size_t workers) {
  MixtureBuilder builder(registry, dirset, spec, scores);
  for (const auto& r : records) builder.add(r);
  return builder.finish(workers);
}

}  // namespace lmt
