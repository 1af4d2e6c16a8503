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

#include <span>

#include "corrmat/common.hpp"

namespace corrmat {

// Unnormalized in-place DFTs over row-major data. The forward transform uses
// exp(-2 pi i k n / N); the inverse uses the + sign and does not divide by N.
// Safe to call concurrently; plans are cached per shape.
void fft1d(std::span<Complex> data, bool inverse = false);
void fft2d(std::span<Complex> data, int rows, int cols, bool inverse = false);

}  // namespace corrmat
