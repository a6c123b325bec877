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

#include "udds/merge.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "udds/errors.hpp"
#include "udds/random.hpp"

namespace udds {

namespace detail {

struct SketchAccess {
  // Per-key sum of `from` into `into`; both must share an epoch.
  static std::uint64_t absorb(QuantileSketch& into, const QuantileSketch& from) {
    std::uint64_t ops = 0;
    for (const auto& [key, count] : from.store_) {
      into.store_.add(key, count);
      ++ops;
    }
    if (into.n_ > std::numeric_limits<std::uint64_t>::max() - from.n_) {
      throw OverflowError("merged item count overflow");
    }
    into.n_ += from.n_;
    into.collapses_ += from.collapses_;
    if (from.min_seen_ && (!into.min_seen_ || *from.min_seen_ < *into.min_seen_)) {
      into.min_seen_ = from.min_seen_;
    }
    if (from.max_seen_ && (!into.max_seen_ || *from.max_seen_ > *into.max_seen_)) {
      into.max_seen_ = from.max_seen_;
    }
    return ops;
  }

  static void collapse_once(QuantileSketch& s) { s.collapse_once(); }
};

}  // namespace detail

namespace {

std::string describe_alpha(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", alpha);
  return buf;
}

// Collapses `s` up to `target` epochs, returning the bucket operations spent.
std::uint64_t raise_epoch(QuantileSketch& s, std::uint32_t target,
                          std::uint32_t& rounds) {
  std::uint64_t ops = 0;
  while (s.epoch() < target) {
    ops += s.size();
    s.uniform_collapse();
    ++rounds;
  }
  return ops;
}

}  // namespace

void check_compatible(const QuantileSketch& a, const QuantileSketch& b) {
  const SketchConfig& ca = a.config();
  const SketchConfig& cb = b.config();
  if (std::bit_cast<std::uint64_t>(ca.alpha0()) !=
      std::bit_cast<std::uint64_t>(cb.alpha0())) {
    throw IncompatibleError("alpha0", "alpha0 differs: " +
                                          describe_alpha(ca.alpha0()) + " vs " +
                                          describe_alpha(cb.alpha0()));
  }
  if (ca.max_buckets() != cb.max_buckets()) {
    throw IncompatibleError("max_buckets",
                            "max_buckets differs: " +
                                std::to_string(ca.max_buckets()) + " vs " +
                                std::to_string(cb.max_buckets()));
  }
  if (ca.policy() != cb.policy()) {
    throw IncompatibleError("policy", "policy differs: " +
                                          std::string(to_string(ca.policy())) +
                                          " vs " +
                                          std::string(to_string(cb.policy())));
  }
  if (ca.policy() != CollapsePolicy::kUniform && a.epoch() != b.epoch()) {
    throw IncompatibleError("epoch",
                            "fixed-gamma sketches at different epochs: " +
                                std::to_string(a.epoch()) + " vs " +
                                std::to_string(b.epoch()));
  }
}

std::pair<QuantileSketch, QuantileSketch> align_epochs(const QuantileSketch& a,
                                                       const QuantileSketch& b) {
  check_compatible(a, b);
  std::pair<QuantileSketch, QuantileSketch> out{a, b};
  const std::uint32_t target = std::max(a.epoch(), b.epoch());
  std::uint32_t rounds = 0;
  raise_epoch(out.first, target, rounds);
  raise_epoch(out.second, target, rounds);
  return out;
}

MergeResult merge_instrumented(const QuantileSketch& a, const QuantileSketch& b) {
  check_compatible(a, b);
  MergeStats stats;
  stats.input_sizes[0] = a.size();
  stats.input_sizes[1] = b.size();

  const std::uint32_t target = std::max(a.epoch(), b.epoch());
  QuantileSketch merged = a;
  stats.bucket_ops += raise_epoch(merged, target, stats.alignment_collapses);
  stats.bucket_ops += merged.size();  // initialising the output from a

  if (b.epoch() < target) {
    QuantileSketch lifted = b;
    stats.bucket_ops += raise_epoch(lifted, target, stats.alignment_collapses);
    stats.bucket_ops += detail::SketchAccess::absorb(merged, lifted);
  } else {
    stats.bucket_ops += detail::SketchAccess::absorb(merged, b);
  }

  const std::size_t limit = merged.config().max_buckets();
  while (merged.size() > limit) {
    stats.bucket_ops += merged.config().policy() == CollapsePolicy::kUniform
                            ? merged.size()
                            : 2;
    detail::SketchAccess::collapse_once(merged);
    ++stats.post_collapses;
  }
  return {std::move(merged), stats};
}

QuantileSketch merge(const QuantileSketch& a, const QuantileSketch& b) {
  return merge_instrumented(a, b).sketch;
}

std::vector<std::uint64_t> PartitionLayout::offsets() const {
  std::vector<std::uint64_t> out;
  out.reserve(sizes.size() + 1);
  std::uint64_t at = 0;
  for (std::uint64_t s : sizes) {
    out.push_back(at);
    at += s;
  }
  out.push_back(at);
  return out;
}

PartitionLayout partition_stream(std::uint64_t n, std::uint64_t p) {
  if (p == 0) throw ParameterError("partition count must be >= 1");
  PartitionLayout layout{n, p, {}};
  layout.sizes.reserve(p);
  const std::uint64_t base = n / p;
  const std::uint64_t extra = n % p;
  for (std::uint64_t i = 0; i < p; ++i) {
    layout.sizes.push_back(i < extra ? base + 1 : base);
  }
  return layout;
}

TreeShape parse_tree_shape(std::string_view name) {
  if (name == "balanced" || name == "balanced-binary") return TreeShape::kBalanced;
  if (name == "linear" || name == "linear-left-fold") return TreeShape::kLinear;
  if (name == "random") return TreeShape::kRandom;
  throw ParameterError("unknown tree shape: " + std::string(name));
}

std::vector<MergeNode> build_merge_tree(const ReductionPlan& plan) {
  if (plan.p == 0) throw ParameterError("reduction plan needs p >= 1");
  std::vector<MergeNode> nodes;
  nodes.reserve(2 * plan.p - 1);

  if (plan.shape == TreeShape::kLinear) {
    nodes.push_back({.leaf = 0});
    std::size_t acc = 0;
    for (std::size_t i = 1; i < plan.p; ++i) {
      nodes.push_back({.leaf = i});
      const std::size_t leaf = nodes.size() - 1;
      nodes.push_back({.left = acc, .right = leaf});
      acc = nodes.size() - 1;
    }
    return nodes;
  }

  SplitMix64 rng(plan.seed);
  std::function<std::size_t(std::size_t, std::size_t)> build =
      [&](std::size_t lo, std::size_t hi) -> std::size_t {
    if (hi - lo == 1) {
      nodes.push_back({.leaf = lo});
      return nodes.size() - 1;
    }
    const std::size_t split = plan.shape == TreeShape::kBalanced
                                  ? lo + (hi - lo) / 2
                                  : lo + 1 + rng.next_below(hi - lo - 1);
    const std::size_t left = build(lo, split);
    const std::size_t right = build(split, hi);
    nodes.push_back({.left = left, .right = right});
    return nodes.size() - 1;
  };
  build(0, plan.p);
  return nodes;
}

ReduceResult reduce_instrumented(std::span<const QuantileSketch> sketches,
                                 const ReductionPlan& plan) {
  if (sketches.empty()) throw ParameterError("nothing to reduce");
  if (sketches.size() != plan.p) {
    throw ParameterError("plan expects " + std::to_string(plan.p) +
                         " sketches, got " + std::to_string(sketches.size()));
  }
  const std::vector<MergeNode> tree = build_merge_tree(plan);

  std::vector<std::optional<QuantileSketch>> values(tree.size());
  std::size_t merges = 0;
  std::uint64_t ops = 0;
  std::uint64_t max_ops = 0;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const MergeNode& node = tree[i];
    if (node.is_leaf()) {
      values[i] = sketches[node.leaf];
      continue;
    }
    MergeResult r = merge_instrumented(*values[node.left], *values[node.right]);
    values[node.left].reset();
    values[node.right].reset();
    ++merges;
    ops += r.stats.bucket_ops;
    max_ops = std::max(max_ops, r.stats.bucket_ops);
    values[i] = std::move(r.sketch);
  }
  return {std::move(*values.back()), merges, ops, max_ops};
}

QuantileSketch reduce(std::span<const QuantileSketch> sketches,
                      const ReductionPlan& plan) {
  return reduce_instrumented(sketches, plan).sketch;
}

}  // namespace udds
