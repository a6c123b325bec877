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

#include "udds/sketch.hpp"

#include <bit>
#include <cmath>
#include <iterator>
#include <limits>
#include <string>

#include "udds/errors.hpp"

namespace udds {

namespace {

// Largest accepted key magnitude.
constexpr double kMaxKeyMagnitude = 4.0e18;

std::int64_t checked_key(double ratio) {
  const double key = std::ceil(ratio);
  if (!(std::fabs(key) < kMaxKeyMagnitude)) {
    throw DomainError("bucket key out of range: " + std::to_string(ratio));
  }
  return static_cast<std::int64_t>(key);
}

void require_indexable(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("value must be finite and > 0, got " + std::to_string(x));
  }
}

}  // namespace

std::string_view to_string(CollapsePolicy policy) {
  switch (policy) {
    case CollapsePolicy::kUniform:
      return "uniform";
    case CollapsePolicy::kCollapseFirst:
      return "dd-first";
    case CollapsePolicy::kCollapseLast:
      return "dd-last";
  }
  return "unknown";
}

CollapsePolicy parse_policy(std::string_view name) {
  if (name == "uniform" || name == "udd") return CollapsePolicy::kUniform;
  if (name == "dd-first" || name == "first" || name == "dd") {
    return CollapsePolicy::kCollapseFirst;
  }
  if (name == "dd-last" || name == "last") return CollapsePolicy::kCollapseLast;
  throw ParameterError("unknown collapse policy: " + std::string(name));
}

double gamma_from_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ParameterError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  return 1.0 + 2.0 * alpha / (1.0 - alpha);
}

double alpha_from_gamma(double gamma) {
  if (!(gamma > 1.0)) {
    throw ParameterError("gamma must be > 1, got " + std::to_string(gamma));
  }
  if (std::isinf(gamma)) return 1.0;
  return (gamma - 1.0) / (gamma + 1.0);
}

std::int64_t bucket_index(double x, double gamma) {
  require_indexable(x);
  if (!(gamma > 1.0)) {
    throw ParameterError("gamma must be > 1, got " + std::to_string(gamma));
  }
  return checked_key(std::log(x) / std::log(gamma));
}

double value_estimate(std::int64_t key, double gamma) {
  return 2.0 * std::pow(gamma, static_cast<double>(key)) / (gamma + 1.0);
}

std::uint64_t lower_rank(double q, std::uint64_t n) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ParameterError("q must lie in [0, 1], got " + std::to_string(q));
  }
  if (n == 0) throw StateError("rank of an empty multiset");
  const double r = std::floor(1.0 + q * static_cast<double>(n - 1));
  const auto rank = static_cast<std::uint64_t>(r);
  return rank < 1 ? 1 : (rank > n ? n : rank);
}

// --- SketchConfig ---------------------------------------------------------

SketchConfig::SketchConfig(double alpha0, std::uint32_t max_buckets,
                           CollapsePolicy policy)
    : alpha0_(alpha0),
      max_buckets_(max_buckets),
      policy_(policy),
      gamma0_(gamma_from_alpha(alpha0)) {
  if (max_buckets < 2) {
    throw ParameterError("max_buckets must be >= 2, got " +
                         std::to_string(max_buckets));
  }
  switch (policy) {
    case CollapsePolicy::kUniform:
    case CollapsePolicy::kCollapseFirst:
    case CollapsePolicy::kCollapseLast:
      break;
    default:
      throw ParameterError("invalid collapse policy");
  }
}

bool operator==(const SketchConfig& a, const SketchConfig& b) noexcept {
  return std::bit_cast<std::uint64_t>(a.alpha0_) ==
             std::bit_cast<std::uint64_t>(b.alpha0_) &&
         a.max_buckets_ == b.max_buckets_ && a.policy_ == b.policy_;
}

// --- BucketStore ----------------------------------------------------------

void BucketStore::add(std::int64_t key, std::uint64_t count) {
  if (count == 0) throw ParameterError("bucket increment must be positive");
  auto [it, inserted] = map_.try_emplace(key, count);
  if (!inserted) {
    if (it->second > std::numeric_limits<std::uint64_t>::max() - count) {
      throw OverflowError("bucket count overflow at key " + std::to_string(key));
    }
    it->second += count;
  }
}

void BucketStore::decrement(std::int64_t key) {
  auto it = map_.find(key);
  if (it == map_.end()) {
    throw UnderflowError("no item in bucket " + std::to_string(key));
  }
  if (--it->second == 0) map_.erase(it);
}

void BucketStore::decrement_at_or_above(std::int64_t key) {
  auto it = map_.lower_bound(key);
  if (it == map_.end()) {
    throw UnderflowError("no item in bucket " + std::to_string(key) + " or above");
  }
  if (--it->second == 0) map_.erase(it);
}

std::uint64_t BucketStore::count(std::int64_t key) const {
  auto it = map_.find(key);
  return it == map_.end() ? 0 : it->second;
}

std::uint64_t BucketStore::total() const {
  std::uint64_t sum = 0;
  for (const auto& [key, count] : map_) {
    if (sum > std::numeric_limits<std::uint64_t>::max() - count) {
      throw OverflowError("total count overflow");
    }
    sum += count;
  }
  return sum;
}

void BucketStore::remap_ceil_half() {
  // ceil_half is monotone: remapped keys arrive in order.
  Map remapped;
  for (const auto& [key, count] : map_) {
    const std::int64_t j = ceil_half(key);
    if (!remapped.empty() && std::prev(remapped.end())->first == j) {
      std::prev(remapped.end())->second += count;
    } else {
      remapped.emplace_hint(remapped.end(), j, count);
    }
  }
  map_ = std::move(remapped);
}

void BucketStore::fold_extreme(CollapseEnd end) {
  if (map_.size() < 2) {
    throw StateError("collapse needs at least two buckets, store has " +
                     std::to_string(map_.size()));
  }
  if (end == CollapseEnd::kFirst) {
    auto y = map_.begin();
    auto z = std::next(y);
    z->second += y->second;
    map_.erase(y);
  } else {
    auto z = std::prev(map_.end());
    auto y = std::prev(z);
    z->second += y->second;
    map_.erase(y);
  }
}

// --- QuantileSketch -------------------------------------------------------

QuantileSketch::QuantileSketch(const SketchConfig& config)
    : config_(config),
      log_gamma0_(std::log(config.gamma0())),
      gamma_(config.gamma0()) {}

QuantileSketch QuantileSketch::restore(const SketchConfig& config,
                                       std::uint32_t epoch, BucketStore store,
                                       std::optional<double> min_seen,
                                       std::optional<double> max_seen) {
  if (store.size() > config.max_buckets()) {
    throw StateError("store holds " + std::to_string(store.size()) +
                     " buckets, limit is " +
                     std::to_string(config.max_buckets()));
  }
  if (epoch != 0 && config.policy() != CollapsePolicy::kUniform) {
    throw StateError("fixed-gamma policies cannot have a non-zero epoch");
  }
  QuantileSketch sketch(config);
  for (std::uint32_t e = 0; e < epoch; ++e) sketch.gamma_ *= sketch.gamma_;
  sketch.epoch_ = epoch;
  sketch.n_ = store.total();
  sketch.store_ = std::move(store);
  sketch.min_seen_ = min_seen;
  sketch.max_seen_ = max_seen;
  return sketch;
}

std::int64_t QuantileSketch::key_of(double x) const {
  require_indexable(x);
  return checked_key(std::log(x) /
                     std::ldexp(log_gamma0_, static_cast<int>(epoch_)));
}

void QuantileSketch::observe(double x) {
  if (!min_seen_ || x < *min_seen_) min_seen_ = x;
  if (!max_seen_ || x > *max_seen_) max_seen_ = x;
}

void QuantileSketch::insert(double x) {
  const std::int64_t key = key_of(x);
  if (n_ == std::numeric_limits<std::uint64_t>::max()) {
    throw OverflowError("item count overflow");
  }
  store_.add(key);
  ++n_;
  observe(x);
  enforce_limit();
}

void QuantileSketch::remove(double x) {
  // Fixed-gamma folds move counts upward only.
  if (config_.policy() == CollapsePolicy::kUniform) {
    store_.decrement(key_of(x));
  } else {
    store_.decrement_at_or_above(key_of(x));
  }
  --n_;
}

void QuantileSketch::uniform_collapse() {
  store_.remap_ceil_half();
  gamma_ *= gamma_;
  ++epoch_;
  ++collapses_;
}

void QuantileSketch::dd_collapse(CollapseEnd end) {
  store_.fold_extreme(end);
  ++collapses_;
}

void QuantileSketch::collapse_once() {
  switch (config_.policy()) {
    case CollapsePolicy::kUniform:
      uniform_collapse();
      break;
    case CollapsePolicy::kCollapseFirst:
      dd_collapse(CollapseEnd::kFirst);
      break;
    case CollapsePolicy::kCollapseLast:
      dd_collapse(CollapseEnd::kLast);
      break;
  }
}

void QuantileSketch::enforce_limit() {
  while (store_.size() > config_.max_buckets()) collapse_once();
}

double QuantileSketch::quantile(double q) const {
  if (n_ == 0) throw StateError("quantile of an empty sketch");
  const std::uint64_t rank = lower_rank(q, n_);
  std::uint64_t seen = 0;
  for (const auto& [key, count] : store_) {
    seen += count;
    if (seen >= rank) return value_estimate(key, gamma_);
  }
  // Unreachable while the count invariant holds.
  throw StateError("bucket counts do not cover rank " + std::to_string(rank));
}

bool operator==(const QuantileSketch& a, const QuantileSketch& b) {
  return a.config_ == b.config_ && a.epoch_ == b.epoch_ && a.n_ == b.n_ &&
         a.store_ == b.store_;
}

}  // namespace udds
