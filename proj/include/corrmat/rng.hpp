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

#pragma once

#include <cstdint>
#include <random>

namespace corrmat {

// Substream ids used by the samplers. Field and GOE parts never share a
// stream, so the two components are independent for every (seed, trial).
enum Substream : std::uint64_t {
  kFieldStream = 0,
  kGoeStream = 1,
  kDenseStream = 2,
  kAuditStream = 3,
  kTestMatrixStream = 4,
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic per-(seed, trial, substream) generator. Streams are keyed by
// hashing the triple, so the draws of trial t never depend on how many
// other trials ran before it or on which thread.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t trial, std::uint64_t substream);

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }
  // Uniform integer in [0, n).
  int index(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace corrmat
