// Copyright 2026 The GANN Authors.
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

#include "gann/vector_set.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "gann/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "vector file codecs assume a little-endian host");

namespace gann {

namespace {

std::size_t value_size(VecFormat f) {
  return f == VecFormat::kBvecs ? 1 : 4;
}

[[noreturn]] void truncated(const std::string& path, std::uint64_t offset) {
  throw FormatError(path + ": truncated record at byte offset " +
                    std::to_string(offset));
}

}  // namespace

VectorSet load_vecs(const std::string& path, VecFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);

  VectorSet set;
  std::uint64_t offset = 0;
  std::vector<char> buf;
  while (true) {
    std::int32_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), 4);
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != 4) truncated(path, offset);
    if (dim <= 0) {
      throw FormatError(path + ": non-positive dimension " +
                        std::to_string(dim) + " at byte offset " +
                        std::to_string(offset));
    }
    if (set.n > 0 && static_cast<std::size_t>(dim) != set.d) {
      throw FormatError(path + ": inconsistent dimension " +
                        std::to_string(dim) + " (expected " +
                        std::to_string(set.d) + ") at byte offset " +
                        std::to_string(offset));
    }
    offset += 4;

    const std::size_t payload = static_cast<std::size_t>(dim) * value_size(format);
    buf.resize(payload);
    in.read(buf.data(), static_cast<std::streamsize>(payload));
    if (static_cast<std::size_t>(in.gcount()) != payload) truncated(path, offset);
    offset += payload;

    if (set.n == 0) set.d = static_cast<std::size_t>(dim);
    const std::size_t base = set.values.size();
    set.values.resize(base + set.d);
    switch (format) {
      case VecFormat::kFvecs:
        std::memcpy(set.values.data() + base, buf.data(), payload);
        break;
      case VecFormat::kBvecs:
        for (std::size_t j = 0; j < set.d; ++j) {
          set.values[base + j] =
              static_cast<float>(static_cast<unsigned char>(buf[j]));
        }
        break;
      case VecFormat::kIvecs: {
        const std::int32_t* v = reinterpret_cast<const std::int32_t*>(buf.data());
        for (std::size_t j = 0; j < set.d; ++j) {
          set.values[base + j] = static_cast<float>(v[j]);
        }
        break;
      }
    }
    ++set.n;
  }
  if (set.n == 0) throw FormatError(path + ": empty file");
  return set;
}

void save_vecs(const VectorSet& set, const std::string& path, VecFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const std::int32_t dim = static_cast<std::int32_t>(set.d);
  std::vector<char> buf(set.d * value_size(format));
  for (std::size_t i = 0; i < set.n; ++i) {
    out.write(reinterpret_cast<const char*>(&dim), 4);
    const float* row = set.values.data() + i * set.d;
    switch (format) {
      case VecFormat::kFvecs:
        std::memcpy(buf.data(), row, set.d * 4);
        break;
      case VecFormat::kBvecs:
        for (std::size_t j = 0; j < set.d; ++j) {
          buf[j] = static_cast<char>(static_cast<unsigned char>(row[j]));
        }
        break;
      case VecFormat::kIvecs: {
        std::int32_t* v = reinterpret_cast<std::int32_t*>(buf.data());
        for (std::size_t j = 0; j < set.d; ++j) {
          v[j] = static_cast<std::int32_t>(row[j]);
        }
        break;
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("short write to " + path);
}

void save_ivecs(const std::vector<std::vector<std::int32_t>>& rows,
                const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const auto& row : rows) {
    const std::int32_t dim = static_cast<std::int32_t>(row.size());
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * 4));
  }
  if (!out) throw IoError("short write to " + path);
}

std::vector<std::vector<std::int32_t>> load_ivecs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::vector<std::int32_t>> rows;
  std::uint64_t offset = 0;
  std::size_t expected_d = 0;
  while (true) {
    std::int32_t dim = 0;
    in.read(reinterpret_cast<char*>(&dim), 4);
    if (in.gcount() == 0 && in.eof()) break;
    if (in.gcount() != 4) truncated(path, offset);
    if (dim <= 0) {
      throw FormatError(path + ": non-positive dimension " +
                        std::to_string(dim) + " at byte offset " +
                        std::to_string(offset));
    }
    if (!rows.empty() && static_cast<std::size_t>(dim) != expected_d) {
      throw FormatError(path + ": inconsistent dimension " +
                        std::to_string(dim) + " (expected " +
                        std::to_string(expected_d) + ") at byte offset " +
                        std::to_string(offset));
    }
    offset += 4;
    expected_d = static_cast<std::size_t>(dim);
    std::vector<std::int32_t> row(expected_d);
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(expected_d * 4));
    if (static_cast<std::size_t>(in.gcount()) != expected_d * 4) {
      truncated(path, offset);
    }
    offset += expected_d * 4;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path + ": empty file");
  return rows;
}

}  // namespace gann
