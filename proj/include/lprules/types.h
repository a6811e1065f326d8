// Copyright 2026 The lprules Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPRULES_TYPES_H_
#define LPRULES_TYPES_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace lprules {

// Dense index into the entity intern table.
using EntityId = std::uint32_t;

// Relation label. With n base relations, ids n..2n-1 are the reverses of
// 0..n-1.
using RelationId = std::uint32_t;

// A labeled directed edge tail --relation--> head.
struct Fact {
  EntityId tail = 0;
  RelationId relation = 0;
  EntityId head = 0;

  friend auto operator<=>(const Fact&, const Fact&) = default;
};

// Pair (tail, head) of one edge in a per-relation edge list.
struct Edge {
  EntityId tail = 0;
  EntityId head = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline std::uint64_t HashCombine(std::uint64_t seed, std::uint64_t value) {
  // splitmix64 finalizer over the xor-folded input.
  std::uint64_t z = seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) +
                            (seed >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct FactHash {
  std::size_t operator()(const Fact& f) const {
    return static_cast<std::size_t>(
        HashCombine(HashCombine(f.tail, f.relation), f.head));
  }
};

}  // namespace lprules

#endif  // LPRULES_TYPES_H_
