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

#include "udds/codec.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>

#include <nlohmann/json.hpp>

#include "udds/errors.hpp"

namespace udds::codec {

namespace {

class Writer {
 public:
  explicit Writer(std::size_t reserve) { out_.reserve(reserve); }

  void bytes(const char* p, std::size_t n) { out_.insert(out_.end(), p, p + n); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }

  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) {
      throw LengthError("truncated sketch envelope: need " + std::to_string(n) +
                        " bytes at offset " + std::to_string(pos_) + ", have " +
                        std::to_string(remaining()));
    }
  }
  std::uint64_t le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

double extreme_or_nan(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<std::uint8_t> encode(const QuantileSketch& sketch) {
  const SketchConfig& cfg = sketch.config();
  Writer w(kHeaderSize + kRecordSize * sketch.size() + kTrailerSize);
  w.bytes(kMagic, sizeof kMagic);
  w.u8(kVersion);
  w.u8(static_cast<std::uint8_t>(cfg.policy()));
  w.f64(cfg.alpha0());
  w.u32(cfg.max_buckets());
  w.u32(sketch.epoch());
  w.u64(sketch.count());
  w.u32(static_cast<std::uint32_t>(sketch.size()));
  for (const auto& [key, count] : sketch.buckets()) {
    w.i64(key);
    w.u64(count);
  }
  w.f64(extreme_or_nan(sketch.min_seen()));
  w.f64(extreme_or_nan(sketch.max_seen()));
  return w.take();
}

QuantileSketch decode(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  auto magic = r.bytes(sizeof kMagic);
  if (std::memcmp(magic.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("bad magic, not a UDDS sketch envelope");
  }
  const std::uint8_t version = r.u8();
  if (version != kVersion) {
    throw FormatError("unsupported envelope version " + std::to_string(version));
  }
  const std::uint8_t policy_byte = r.u8();
  if (policy_byte > static_cast<std::uint8_t>(CollapsePolicy::kCollapseLast)) {
    throw FormatError("unknown policy byte " + std::to_string(policy_byte));
  }
  const double alpha0 = r.f64();
  const std::uint32_t m = r.u32();
  const std::uint32_t epoch = r.u32();
  const std::uint64_t n = r.u64();
  const std::uint32_t bucket_count = r.u32();

  std::optional<SketchConfig> cfg;
  try {
    cfg.emplace(alpha0, m, static_cast<CollapsePolicy>(policy_byte));
  } catch (const ParameterError& e) {
    throw CorruptionError(std::string("invalid sketch parameters: ") + e.what());
  }
  if (bucket_count > m) {
    throw CorruptionError("bucket_count " + std::to_string(bucket_count) +
                          " exceeds m = " + std::to_string(m));
  }
  const std::size_t body =
      static_cast<std::size_t>(bucket_count) * kRecordSize + kTrailerSize;
  if (r.remaining() != body) {
    throw LengthError("envelope declares " + std::to_string(body) +
                      " bytes after the header, found " +
                      std::to_string(r.remaining()));
  }

  BucketStore store;
  std::optional<std::int64_t> prev;
  std::uint64_t sum = 0;
  for (std::uint32_t i = 0; i < bucket_count; ++i) {
    const std::int64_t key = r.i64();
    const std::uint64_t count = r.u64();
    if (prev && key <= *prev) {
      throw CorruptionError("bucket keys not strictly increasing at record " +
                            std::to_string(i));
    }
    if (count == 0) {
      throw CorruptionError("zero count at record " + std::to_string(i));
    }
    if (sum > std::numeric_limits<std::uint64_t>::max() - count) {
      throw CorruptionError("bucket counts overflow");
    }
    sum += count;
    store.add(key, count);
    prev = key;
  }
  if (sum != n) {
    throw CorruptionError("bucket counts sum to " + std::to_string(sum) +
                          ", header says n = " + std::to_string(n));
  }

  const double lo = r.f64();
  const double hi = r.f64();
  if (std::isnan(lo) != std::isnan(hi)) {
    throw CorruptionError("only one of min_seen/max_seen is present");
  }
  std::optional<double> min_seen;
  std::optional<double> max_seen;
  if (!std::isnan(lo)) {
    if (!(lo > 0.0) || !(hi >= lo)) {
      throw CorruptionError("invalid observed extremes");
    }
    min_seen = lo;
    max_seen = hi;
  }

  try {
    return QuantileSketch::restore(*cfg, epoch, std::move(store), min_seen,
                                   max_seen);
  } catch (const StateError& e) {
    throw CorruptionError(e.what());
  }
}

std::string to_text(const QuantileSketch& sketch) {
  nlohmann::ordered_json j;
  j["magic"] = "UDDS";
  j["version"] = kVersion;
  j["policy"] = std::string(to_string(sketch.config().policy()));
  j["alpha0"] = sketch.config().alpha0();
  j["m"] = sketch.config().max_buckets();
  j["epoch"] = sketch.epoch();
  j["n"] = sketch.count();
  auto buckets = nlohmann::ordered_json::array();
  for (const auto& [key, count] : sketch.buckets()) {
    buckets.push_back({key, count});
  }
  j["buckets"] = std::move(buckets);
  j["min_seen"] = sketch.min_seen() ? nlohmann::ordered_json(*sketch.min_seen())
                                    : nlohmann::ordered_json(nullptr);
  j["max_seen"] = sketch.max_seen() ? nlohmann::ordered_json(*sketch.max_seen())
                                    : nlohmann::ordered_json(nullptr);
  return j.dump();
}

}  // namespace udds::codec
