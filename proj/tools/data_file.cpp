// Copyright 2026 The udds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "data_file.hpp"

#include <bit>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <system_error>

#include "udds/errors.hpp"

namespace udds::tools {

namespace {

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) v |= static_cast<std::uint64_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_values(std::span<const double> values) {
  std::vector<std::uint8_t> out;
  out.reserve(kDataHeaderSize + 8 * values.size() + kDataTrailerSize);
  for (char c : {'U', 'D', 'D', 'V'}) out.push_back(static_cast<std::uint8_t>(c));
  put_le(out, kDataVersion, 4);
  put_le(out, values.size(), 8);
  for (double v : values) put_le(out, std::bit_cast<std::uint64_t>(v), 8);
  put_le(out, values.size(), 8);
  return out;
}

std::vector<double> decode_values(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kDataHeaderSize) {
    throw LengthError("data file shorter than its 16-byte header");
  }
  if (std::memcmp(bytes.data(), "UDDV", 4) != 0) {
    throw FormatError("bad magic, not a UDDV data file");
  }
  const auto version = static_cast<std::uint32_t>(get_le(bytes, 4, 4));
  if (version != kDataVersion) {
    throw FormatError("unsupported data file version " + std::to_string(version));
  }
  const std::uint64_t n = get_le(bytes, 8, 8);
  if (n > (bytes.size() - kDataHeaderSize) / 8 ||
      bytes.size() != kDataHeaderSize + 8 * n + kDataTrailerSize) {
    throw LengthError("data file declares " + std::to_string(n) +
                      " values but is " + std::to_string(bytes.size()) +
                      " bytes long");
  }
  if (get_le(bytes, kDataHeaderSize + 8 * n, 8) != n) {
    throw CorruptionError("data file end marker does not match its header");
  }
  std::vector<double> values;
  values.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    values.push_back(std::bit_cast<double>(get_le(bytes, kDataHeaderSize + 8 * i, 8)));
  }
  return values;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::system_error(errno, std::generic_category(),
                              "cannot create " + tmp.string());
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw std::system_error(EIO, std::generic_category(),
                              "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw std::system_error(ec, "cannot rename into " + path.string());
  }
}

}  // namespace udds::tools
