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

#include "lmtkit/downsample.hpp"

#include <cmath>

#include "lmtkit/error.hpp"
#include "lmtkit/parallel.hpp"

namespace lmt {

std::uint64_t seeded_hash(std::uint64_t seed, std::string_view key) {
  std::uint64_t h = fnv1a64(std::to_string(seed));
  h = fnv1a64(":", h);
  return fnv1a64(key, h);
}

double seeded_uniform(std::uint64_t seed, std::string_view key) {
  return std::ldexp(static_cast<double>(seeded_hash(seed, key) >> 11), -53);
}

bool seeded_below(std::uint64_t seed, std::string_view key, double p) {
  if (!(p > 0.0)) return false;
  if (p >= 1.0) return true;
  // p * 2^64 is exact in binary floating point; compare h < p * 2^64 as
  // h < ceil(p * 2^64).
  const double scaled = std::ceil(std::ldexp(p, 64));
  const auto threshold = static_cast<std::uint64_t>(scaled);
  return seeded_hash(seed, key) < threshold;
}

std::string_view to_string(DirectionClass c) {
  return c == DirectionClass::kForward ? "forward" : "reverse";
}

DirectionClass classify(const Direction& direction) {
  return is_center(direction.tgt) ? DirectionClass::kReverse : DirectionClass::kForward;
}

void RetentionPolicy::validate() const {
  if (!(p_reverse >= 0.0 && p_reverse <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "retention probability must lie in [0,1]");
  }
}

bool retained(const DirectionalExample& example, const RetentionPolicy& policy) {
  if (classify(example) == DirectionClass::kForward) return true;
  return seeded_below(policy.seed, example.id, policy.p_reverse);
}

DownsampleCounts& DownsampleCounts::operator+=(const DownsampleCounts& o) {
  forward_kept += o.forward_kept;
  reverse_kept += o.reverse_kept;
  reverse_dropped += o.reverse_dropped;
  return *this;
}

std::vector<DirectionalExample> downsample(std::span<const DirectionalExample> examples,
                                           const RetentionPolicy& policy,
                                           DownsampleCounts* counts, std::size_t workers) {
  policy.validate();
  std::vector<char> keep(examples.size(), 0);
  parallel_for(examples.size(), workers,
               [&](std::size_t i) { keep[i] = retained(examples[i], policy) ? 1 : 0; });

  std::vector<DirectionalExample> out;
  DownsampleCounts local;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const bool forward = classify(examples[i]) == DirectionClass::kForward;
    if (keep[i]) {
      out.push_back(examples[i]);
      ++(forward ? local.forward_kept : local.reverse_kept);
    } else {
      ++local.reverse_dropped;
    }
  }
  if (counts != nullptr) *counts += local;
  return out;
}

}  // namespace lmt
