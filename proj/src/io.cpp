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

#include "corrmat/io.hpp"

#include <bit>
#include <cmath>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace corrmat {
namespace {

namespace fs = std::filesystem;

constexpr char kMagic[4] = {'C', 'M', 'A', 'T'};
constexpr std::uint32_t kFormatVersion = 1;

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_integral_v<T>);
  for (size_t b = 0; b < sizeof(T); ++b)
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * b)) & 0xff));
}

template <typename T>
T get_le(const std::string& in, size_t& pos) {
  require(pos + sizeof(T) <= in.size(), ErrorCode::kIo, "matrix file is truncated");
  std::uint64_t v = 0;
  for (size_t b = 0; b < sizeof(T); ++b)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + b])) << (8 * b);
  pos += sizeof(T);
  return static_cast<T>(v);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  rows_.back().reserve(header_.size());
  return *this;
}

CsvTable& CsvTable::add(double x) {
  rows_.back().push_back(format_double(x));
  return *this;
}

CsvTable& CsvTable::add(long long x) {
  rows_.back().push_back(std::to_string(x));
  return *this;
}

CsvTable& CsvTable::add(const std::string& s) {
  rows_.back().push_back(s);
  return *this;
}

CsvTable& CsvTable::add(bool b) {
  rows_.back().push_back(b ? "true" : "false");
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out.push_back(',');
      out += cells[c];
    }
    out.push_back('\n');
  };
  emit(header_);
  for (const auto& r : rows_) {
    require(r.size() == header_.size(), ErrorCode::kDimension, "CSV row width mismatch");
    emit(r);
  }
  return out;
}

void ensure_output_dir(const std::string& dir) {
  const fs::path p(dir);
  std::error_code ec;
  if (fs::is_directory(p, ec)) return;
  if (fs::exists(p, ec)) fail(ErrorCode::kIo, "output path '" + dir + "' is not a directory");
  const fs::path parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
  if (!fs::is_directory(parent, ec))
    fail(ErrorCode::kIo, "parent of output directory '" + dir + "' does not exist");
  if (!fs::create_directory(p, ec) && !fs::is_directory(p))
    fail(ErrorCode::kIo, "cannot create output directory '" + dir + "': " + ec.message());
}

void ArtifactSet::add(std::string name, std::string content) {
  require(!contains(name), ErrorCode::kIo, "duplicate artifact '" + name + "'");
  items_.emplace_back(std::move(name), std::move(content));
}

bool ArtifactSet::contains(const std::string& name) const {
  for (const auto& [n, c] : items_)
    if (n == name) return true;
  return false;
}

std::vector<std::string> ArtifactSet::names() const {
  std::vector<std::string> out;
  for (const auto& [n, c] : items_) out.push_back(n);
  return out;
}

void ArtifactSet::commit(const std::string& dir) const {
  ensure_output_dir(dir);
  const fs::path base(dir);
  const std::string suffix = ".tmp." + std::to_string(::getpid());
  std::vector<fs::path> temps;
  try {
    for (const auto& [name, content] : items_) {
      const fs::path target = base / name;
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      fs::path tmp = target;
      tmp += suffix;
      temps.push_back(tmp);
      write_file(tmp, content);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
    throw;
  }
  for (size_t t = 0; t < items_.size(); ++t) {
    std::error_code ec;
    fs::rename(temps[t], base / items_[t].first, ec);
    if (ec) {
      for (size_t r = t; r < temps.size(); ++r) fs::remove(temps[r], ec);
      fail(ErrorCode::kIo, "cannot publish '" + items_[t].first + "': " + ec.message());
    }
  }
}

std::string encode_matrix(const SampleMatrix& m) {
  std::string out(kMagic, 4);
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.N));
  put_le<std::uint64_t>(out, m.seed);
  put_le<std::uint64_t>(out, m.trial);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(m.ensemble_tag.size()));
  out += m.ensemble_tag;
  for (int i = 0; i < m.N; ++i)
    for (int j = 0; j < m.N; ++j) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(m.entries(i, j)));
  return out;
}

SampleMatrix decode_matrix(const std::string& bytes) {
  require(bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0, ErrorCode::kIo,
          "not a corrmat matrix file");
  size_t pos = 4;
  const auto version = get_le<std::uint32_t>(bytes, pos);
  require(version == kFormatVersion, ErrorCode::kIo,
          "unsupported matrix file version " + std::to_string(version));
  SampleMatrix m;
  m.N = static_cast<int>(get_le<std::uint32_t>(bytes, pos));
  m.seed = get_le<std::uint64_t>(bytes, pos);
  m.trial = get_le<std::uint64_t>(bytes, pos);
  const auto tag_len = get_le<std::uint32_t>(bytes, pos);
  require(pos + tag_len <= bytes.size(), ErrorCode::kIo, "matrix file is truncated");
  m.ensemble_tag = bytes.substr(pos, tag_len);
  pos += tag_len;
  require(m.N >= 1 && bytes.size() - pos == static_cast<size_t>(m.N) * m.N * 8, ErrorCode::kIo,
          "matrix payload size does not match N");
  m.entries.resize(m.N, m.N);
  for (int i = 0; i < m.N; ++i)
    for (int j = 0; j < m.N; ++j) m.entries(i, j) = std::bit_cast<double>(get_le<std::uint64_t>(bytes, pos));
  return m;
}

void write_matrix(const std::string& path, const SampleMatrix& m) {
  ArtifactSet set;
  const fs::path p(path);
  set.add(p.filename().string(), encode_matrix(m));
  set.commit(p.has_parent_path() ? p.parent_path().string() : ".");
}

SampleMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_matrix(buf.str());
}

}  // namespace corrmat
