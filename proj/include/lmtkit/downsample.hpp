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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lmtkit/corpus_io.hpp"

namespace lmt {

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

/// 64-bit FNV-1a over raw bytes.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t hash = kFnvOffsetBasis) {
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= kFnvPrime;
  }
  return hash;
}

/// Hash of "<seed in decimal>:<key>". Retention and format draws are pure
/// functions of this value, so shards and thread counts never change them.
std::uint64_t seeded_hash(std::uint64_t seed, std::string_view key);

/// seeded_hash / 2^64, in [0, 1).
double seeded_uniform(std::uint64_t seed, std::string_view key);

/// Exact test of seeded_hash(seed, key) / 2^64 < p, done in integers.
bool seeded_below(std::uint64_t seed, std::string_view key, double p);

enum class DirectionClass { kForward, kReverse };

std::string_view to_string(DirectionClass c);

/// Reverse iff the target is a center (en or zh); en->zh and zh->en are both
/// reverse.
DirectionClass classify(const Direction& direction);
inline DirectionClass classify(const DirectionalExample& e) { return classify(e.direction()); }

struct RetentionPolicy {
  double p_reverse = 0.05;
  std::uint64_t seed = 42;

  /// Throws InvalidArgument unless 0 <= p_reverse <= 1.
  void validate() const;
};

/// Forward examples always pass; a reverse example passes iff its seeded
/// uniform over the example id is below p_reverse.
bool retained(const DirectionalExample& example, const RetentionPolicy& policy);

struct DownsampleCounts {
  std::size_t forward_kept = 0;
  std::size_t reverse_kept = 0;
  std::size_t reverse_dropped = 0;

  DownsampleCounts& operator+=(const DownsampleCounts& o);
  friend bool operator==(const DownsampleCounts&, const DownsampleCounts&) = default;
};

/// Order-preserving filter. `workers` only changes the wall clock.
std::vector<DirectionalExample> downsample(std::span<const DirectionalExample> examples,
                                           const RetentionPolicy& policy,
                                           DownsampleCounts* counts = nullptr,
                                           std::size_t workers = 1);

}  // namespace lmt
