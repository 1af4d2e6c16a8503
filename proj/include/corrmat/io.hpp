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

#include <string>
#include <utility>
#include <vector>

#include "corrmat/common.hpp"
#include "corrmat/sampler.hpp"

namespace corrmat {

// 17 significant digits, general notation.
std::string format_double(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row();
  CsvTable& add(double x);
  CsvTable& add(long long x);
  CsvTable& add(int x) { return add(static_cast<long long>(x)); }
  CsvTable& add(const std::string& s);
  CsvTable& add(const char* s) { return add(std::string(s)); }
  CsvTable& add(bool b);

  size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Creates `dir` if its parent exists; throws kIo otherwise.
void ensure_output_dir(const std::string& dir);

// Collects named artifacts in memory and publishes them together: every
// file is first written to a temporary name, then all are renamed. Nothing
// is left behind if any write fails.
class ArtifactSet {
 public:
  void add(std::string name, std::string content);
  void add_binary(std::string name, std::string bytes) { add(std::move(name), std::move(bytes)); }
  bool contains(const std::string& name) const;
  const std::vector<std::pair<std::string, std::string>>& items() const { return items_; }
  std::vector<std::string> names() const;

  void commit(const std::string& dir) const;

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

// Binary dump: "CMAT", u32 version, u32 N, u64 seed, u64 trial,
// u32 tag length, tag bytes, N*N little-endian f64 in row-major order.
std::string encode_matrix(const SampleMatrix& m);
SampleMatrix decode_matrix(const std::string& bytes);
void write_matrix(const std::string& path, const SampleMatrix& m);
SampleMatrix read_matrix(const std::string& path);

}  // namespace corrmat
