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

// Merging sketches and simulating a parallel tree reduction over them.
//
// Two uniform-collapse sketches built from the same (alpha0, m) walk the same
// gamma lineage gamma0, gamma0^2, gamma0^4, ... so the one with the lower epoch
// can be collapsed until both share a gamma. After that, buckets with equal
// keys cover equal intervals and merging is a per-key sum, followed by the
// usual collapse loop. The result equals the sketch of the concatenated input,
// which makes merge commutative and associative and lets any reduction tree
// produce the same answer.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "udds/sketch.hpp"

namespace udds {

/// Throws IncompatibleError naming the first differing field among alpha0,
/// max_buckets and policy, or "epoch" for fixed-gamma policies whose epochs
/// differ.
void check_compatible(const QuantileSketch& a, const QuantileSketch& b);

/// Returns copies of a and b raised to the larger of the two epochs.
std::pair<QuantileSketch, QuantileSketch> align_epochs(const QuantileSketch& a,
                                                       const QuantileSketch& b);

struct MergeStats {
  /// Bucket reads, writes and remaps performed by the merge.
  std::uint64_t bucket_ops = 0;
  std::uint32_t alignment_collapses = 0;
  std::uint32_t post_collapses = 0;
  std::size_t input_sizes[2] = {0, 0};

  std::uint32_t collapse_rounds() const noexcept {
    return alignment_collapses + post_collapses;
  }
};

struct MergeResult {
  QuantileSketch sketch;
  MergeStats stats;
};

/// Pure merge: inputs are left untouched.
QuantileSketch merge(const QuantileSketch& a, const QuantileSketch& b);
MergeResult merge_instrumented(const QuantileSketch& a, const QuantileSketch& b);

struct PartitionLayout {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  std::vector<std::uint64_t> sizes;

  /// Start offset of each partition, plus n as a final sentinel.
  std::vector<std::uint64_t> offsets() const;
};

/// Contiguous split: the first n mod p partitions get ceil(n/p) items, the
/// rest floor(n/p). Throws ParameterError for p == 0.
PartitionLayout partition_stream(std::uint64_t n, std::uint64_t p);

enum class TreeShape { kBalanced, kLinear, kRandom };

TreeShape parse_tree_shape(std::string_view name);

struct ReductionPlan {
  std::size_t p = 1;
  TreeShape shape = TreeShape::kBalanced;
  /// Drives split points for TreeShape::kRandom only.
  std::uint64_t seed = 0;
};

/// One node of a binary merge tree. Leaves carry the index of their input;
/// internal nodes reference two earlier nodes.
struct MergeNode {
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::size_t leaf = kNone;
  std::size_t left = kNone;
  std::size_t right = kNone;

  bool is_leaf() const noexcept { return leaf != kNone; }
};

/// Nodes in post-order; the root is the last node. Always p leaves and p - 1
/// internal nodes, with leaves in input order from left to right.
std::vector<MergeNode> build_merge_tree(const ReductionPlan& plan);

struct ReduceResult {
  QuantileSketch sketch;
  std::size_t merges = 0;
  std::uint64_t bucket_ops = 0;
  /// Largest bucket_ops of any single merge.
  std::uint64_t max_merge_ops = 0;
};

QuantileSketch reduce(std::span<const QuantileSketch> sketches,
                      const ReductionPlan& plan);
ReduceResult reduce_instrumented(std::span<const QuantileSketch> sketches,
                                 const ReductionPlan& plan);

}  // namespace udds
