// Copyright 2026 The corrmat Authors.
//
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

#include "corrmat/rng.hpp"

namespace corrmat {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::seed_seq make_seed(std::uint64_t seed, std::uint64_t trial,
                        std::uint64_t substream) {
  std::uint64_t a = splitmix64(seed);
  std::uint64_t b = splitmix64(a ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
  std::uint64_t c = splitmix64(b ^ splitmix64(substream + 0x85157af5ULL));
  return std::seed_seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                       static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                       static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t trial,
                           std::uint64_t substream) {
  auto seq = make_seed(seed, trial, substream);
  engine_.seed(seq);
}

}  // namespace corrmat
