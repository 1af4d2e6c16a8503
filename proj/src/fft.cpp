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

#include "corrmat/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace corrmat {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }

  // fftw_plan_* is not thread-safe; fftw_execute_dft on an existing plan is.
  fftw_plan get(int rows, int cols, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(rows, cols, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    std::vector<Complex> scratch(static_cast<size_t>(rows) * cols);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = rows == 1 ? fftw_plan_dft_1d(cols, buf, buf, sign, flags)
                               : fftw_plan_dft_2d(rows, cols, buf, buf, sign, flags);
    require(plan != nullptr, ErrorCode::kNumeric, "FFT planning failed");
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::span<Complex> data, int rows, int cols, bool inverse) {
  require(static_cast<long long>(rows) * cols == static_cast<long long>(data.size()),
          ErrorCode::kDimension, "FFT buffer size does not match its shape");
  if (data.empty()) return;
  fftw_plan plan = cache().get(rows, cols, inverse ? FFTW_BACKWARD : FFTW_FORWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void fft1d(std::span<Complex> data, bool inverse) {
  execute(data, 1, static_cast<int>(data.size()), inverse);
}

void fft2d(std::span<Complex> data, int rows, int cols, bool inverse) {
  execute(data, rows, cols, inverse);
}

}  // namespace corrmat
