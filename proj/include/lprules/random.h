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

#ifndef LPRULES_RANDOM_H_
#define LPRULES_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

#include "lprules/types.h"

namespace lprules {

// Derives a stream seed from a root seed and a list of identifiers, so that
// per-relation and per-query streams do not depend on scheduling order.
inline std::uint64_t DeriveSeed(std::uint64_t root,
                                std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = HashCombine(0x5851f42d4c957f2dULL, root);
  for (std::uint64_t p : parts) s = HashCombine(s, p);
  return s;
}

// Portable uniform integer draw on [0, n). std::uniform_int_distribution is
// implementation-defined, which would make results differ across standard
// libraries; this uses Lemire's multiply-and-reject method on mt19937_64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Uniform(std::uint64_t n) {
    if (n <= 1) return 0;
    for (;;) {
      const std::uint64_t x = engine_();
      const unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= n || low >= (-n) % n) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

  std::uint64_t Next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lprules

#endif  // LPRULES_RANDOM_H_
