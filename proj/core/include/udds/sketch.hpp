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

// Log-bucketed relative-error quantile sketch.
//
// A value x > 0 lands in bucket i = ceil(log_gamma(x)), which covers the
// interval (gamma^(i-1), gamma^i]. When the store holds more than m buckets a
// collapse runs:
//
//   * UniformCollapse remaps every key i to ceil(i/2) and squares gamma, so the
//     sketch degrades its accuracy uniformly over the whole quantile range.
//   * CollapseFirst / CollapseLast fold the two lowest (highest) buckets into
//     one and keep gamma fixed, sacrificing accuracy at one end.
//
// The uniform variant has a stronger property: the resulting sketch depends
// only on the multiset of inserted values, never on their order, which makes
// it exactly mergeable (see merge.hpp).

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

namespace udds {

enum class CollapsePolicy : std::uint8_t {
  kUniform = 0,
  kCollapseFirst = 1,
  kCollapseLast = 2,
};

enum class CollapseEnd { kFirst, kLast };

std::string_view to_string(CollapsePolicy policy);
/// Accepts "uniform"/"udd", "first"/"dd-first"/"dd", "last"/"dd-last".
CollapsePolicy parse_policy(std::string_view name);

/// gamma = (1 + alpha) / (1 - alpha), evaluated as 1 + 2 alpha / (1 - alpha)
/// so that alpha = 1/3 and alpha = 1/2 give exactly 2 and 3.
double gamma_from_alpha(double alpha);

/// alpha = (gamma - 1) / (gamma + 1). Returns 1 for an infinite gamma.
double alpha_from_gamma(double gamma);

/// ceil(ln x / ln gamma). Throws DomainError for x <= 0 or non-finite x.
std::int64_t bucket_index(double x, double gamma);

/// 2 gamma^i / (gamma + 1): the point of bucket i whose worst-case relative
/// error against any x in (gamma^(i-1), gamma^i] is exactly alpha.
double value_estimate(std::int64_t key, double gamma);

/// Lower quantile rank floor(1 + q (n - 1)), 1-based. Requires n >= 1.
std::uint64_t lower_rank(double q, std::uint64_t n);

/// ceil(key / 2) without going through floating point.
constexpr std::int64_t ceil_half(std::int64_t key) noexcept {
  return (key + 1) >> 1;
}

class SketchConfig {
 public:
  /// Throws ParameterError unless 0 < alpha0 < 1 and max_buckets >= 2.
  SketchConfig(double alpha0, std::uint32_t max_buckets,
               CollapsePolicy policy = CollapsePolicy::kUniform);

  double alpha0() const noexcept { return alpha0_; }
  std::uint32_t max_buckets() const noexcept { return max_buckets_; }
  CollapsePolicy policy() const noexcept { return policy_; }
  double gamma0() const noexcept { return gamma0_; }

  /// Bitwise equality on alpha0.
  friend bool operator==(const SketchConfig& a, const SketchConfig& b) noexcept;

 private:
  double alpha0_;
  std::uint32_t max_buckets_;
  CollapsePolicy policy_;
  double gamma0_;
};

/// Sparse map from bucket key to a strictly positive count.
class BucketStore {
 public:
  using Map = std::map<std::int64_t, std::uint64_t>;
  using const_iterator = Map::const_iterator;

  /// Adds `count` (> 0) to bucket `key`. Throws OverflowError on wrap.
  void add(std::int64_t key, std::uint64_t count = 1);
  /// Decrements bucket `key`, dropping it at zero. Throws UnderflowError if
  /// the bucket is absent.
  void decrement(std::int64_t key);
  /// Decrements the smallest present key >= `key`. Throws UnderflowError if
  /// there is none.
  void decrement_at_or_above(std::int64_t key);

  std::uint64_t count(std::int64_t key) const;
  bool contains(std::int64_t key) const { return map_.contains(key); }
  std::size_t size() const noexcept { return map_.size(); }
  bool empty() const noexcept { return map_.empty(); }
  std::uint64_t total() const;

  const_iterator begin() const noexcept { return map_.begin(); }
  const_iterator end() const noexcept { return map_.end(); }

  /// Replaces every key i by ceil(i/2), summing colliding counts.
  void remap_ceil_half();
  /// Takes the two lowest (kFirst) or two highest (kLast) keys y < z and
  /// moves the count of y into z.
  void fold_extreme(CollapseEnd end);

  friend bool operator==(const BucketStore&, const BucketStore&) = default;

 private:
  Map map_;
};

class QuantileSketch;

namespace detail {
struct SketchAccess;
}

class QuantileSketch {
 public:
  explicit QuantileSketch(const SketchConfig& config);

  /// Rebuilds a sketch from its persisted fields. The store must hold at most
  /// max_buckets entries; n is taken as the sum of its counts.
  static QuantileSketch restore(const SketchConfig& config, std::uint32_t epoch,
                                BucketStore store,
                                std::optional<double> min_seen,
                                std::optional<double> max_seen);

  const SketchConfig& config() const noexcept { return config_; }
  std::uint32_t epoch() const noexcept { return epoch_; }
  double gamma() const noexcept { return gamma_; }
  double alpha() const { return alpha_from_gamma(gamma_); }
  std::uint64_t count() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  std::uint64_t collapses() const noexcept { return collapses_; }
  std::size_t size() const noexcept { return store_.size(); }
  const BucketStore& buckets() const noexcept { return store_; }
  std::optional<double> min_seen() const noexcept { return min_seen_; }
  std::optional<double> max_seen() const noexcept { return max_seen_; }

  /// Bucket key of x under the current gamma.
  ///
  /// Computed as ceil(ln x / (2^epoch * ln gamma0)). Scaling by a power of two
  /// is exact in binary floating point, so ceil_half applied to the epoch-e key
  /// reproduces the epoch-(e+1) key bit for bit.
  std::int64_t key_of(double x) const;

  void insert(double x);
  /// Throws UnderflowError if x's bucket is empty; the sketch is unchanged.
  /// Under the fixed-gamma policies a folded-away bucket resolves to the
  /// nearest present bucket above it.
  void remove(double x);

  void uniform_collapse();
  /// Throws StateError with fewer than two buckets.
  void dd_collapse(CollapseEnd end);

  /// Lower q-quantile estimate. Throws StateError when empty and
  /// ParameterError for q outside [0, 1].
  double quantile(double q) const;

  /// Equality of the summary itself: config, epoch, n and every bucket.
  /// Collapse counters and observed extremes are bookkeeping and excluded.
  friend bool operator==(const QuantileSketch& a, const QuantileSketch& b);

 private:
  friend struct detail::SketchAccess;

  void collapse_once();
  void enforce_limit();
  void observe(double x);

  SketchConfig config_;
  double log_gamma0_;
  double gamma_;
  std::uint32_t epoch_ = 0;
  std::uint64_t n_ = 0;
  std::uint64_t collapses_ = 0;
  BucketStore store_;
  std::optional<double> min_seen_;
  std::optional<double> max_seen_;
};

}  // namespace udds
