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

// Raw value files (.uddv), little-endian:
//
//   0     4    magic "UDDV"
//   4     4    version (1), unsigned
//   8     8    n, unsigned
//   16    8*n  values, IEEE-754 doubles
//   16+8n 8    n again, unsigned (end marker; catches truncated writes)

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace udds::tools {

inline constexpr std::uint32_t kDataVersion = 1;
inline constexpr std::size_t kDataHeaderSize = 16;
inline constexpr std::size_t kDataTrailerSize = 8;

std::vector<std::uint8_t> encode_values(std::span<const double> values);
/// Throws FormatError / LengthError / CorruptionError.
std::vector<double> decode_values(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes to a sibling temporary file and renames it into place, so a failed
/// write never leaves a partial file at `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);

}  // namespace udds::tools
