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

#pragma once

#include <cstdint>

#include "udds/sketch.hpp"

namespace udds {

/// Quantile sketch over all of R: negatives are stored as -x in a mirror
/// sketch, zeros in a plain counter.
class TwoSidedSketch {
 public:
  explicit TwoSidedSketch(const SketchConfig& config)
      : positive_(config), negative_(config) {}

  void insert(double x);
  void remove(double x);

  /// Walks the sorted order: negatives (most negative first), zeros, then
  /// positives.
  double quantile(double q) const;

  std::uint64_t count() const noexcept {
    return positive_.count() + negative_.count() + zero_count_;
  }
  const QuantileSketch& positive() const noexcept { return positive_; }
  const QuantileSketch& negative() const noexcept { return negative_; }
  std::uint64_t zero_count() const noexcept { return zero_count_; }

 private:
  QuantileSketch positive_;
  QuantileSketch negative_;
  std::uint64_t zero_count_ = 0;
};

}  // namespace udds
