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

// Binary sketch envelope (.udds). All integers little-endian, no padding:
//
//   offset  size  field
//   0       4     magic "UDDS"
//   4       1     version (1)
//   5       1     policy (0 uniform, 1 dd-first, 2 dd-last)
//   6       8     alpha0, IEEE-754 double
//   14      4     m (max buckets), unsigned
//   18      4     epoch, unsigned
//   22      8     n, unsigned
//   30      4     bucket_count, unsigned
//   34      16*k  records: key (int64), count (uint64), keys strictly ascending
//   34+16k  8     min_seen, double (NaN when absent)
//   42+16k  8     max_seen, double (NaN when absent)
//
// Keys are sorted, so equal sketches encode to equal bytes.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "udds/sketch.hpp"

namespace udds::codec {

inline constexpr char kMagic[4] = {'U', 'D', 'D', 'S'};
inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kHeaderSize = 34;
inline constexpr std::size_t kRecordSize = 16;
inline constexpr std::size_t kTrailerSize = 16;

std::vector<std::uint8_t> encode(const QuantileSketch& sketch);

/// Throws FormatError (magic, version, policy), LengthError (truncated or
/// trailing bytes) or CorruptionError (parameters, key order, zero counts,
/// count sum, size limit, extremes).
QuantileSketch decode(std::span<const std::uint8_t> bytes);

/// Debug-only JSON rendering; buckets as an array of [key, count] pairs.
std::string to_text(const QuantileSketch& sketch);

}  // namespace udds::codec
