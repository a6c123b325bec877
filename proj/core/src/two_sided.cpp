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

#include "udds/two_sided.hpp"

#include <cmath>
#include <string>

#include "udds/errors.hpp"

namespace udds {

void TwoSidedSketch::insert(double x) {
  if (std::isnan(x)) throw DomainError("cannot insert NaN");
  if (x > 0.0) {
    positive_.insert(x);
  } else if (x < 0.0) {
    negative_.insert(-x);
  } else {
    ++zero_count_;
  }
}

void TwoSidedSketch::remove(double x) {
  if (std::isnan(x)) throw DomainError("cannot remove NaN");
  if (x > 0.0) {
    positive_.remove(x);
  } else if (x < 0.0) {
    negative_.remove(-x);
  } else {
    if (zero_count_ == 0) throw UnderflowError("no zero item to remove");
    --zero_count_;
  }
}

double TwoSidedSketch::quantile(double q) const {
  const std::uint64_t n = count();
  if (n == 0) throw StateError("quantile of an empty sketch");
  const std::uint64_t rank = lower_rank(q, n);

  std::uint64_t seen = 0;
  const auto& neg = negative_.buckets();
  for (auto it = neg.end(); it != neg.begin();) {
    --it;
    seen += it->second;
    if (seen >= rank) return -value_estimate(it->first, negative_.gamma());
  }
  seen += zero_count_;
  if (seen >= rank) return 0.0;
  for (const auto& [key, c] : positive_.buckets()) {
    seen += c;
    if (seen >= rank) return value_estimate(key, positive_.gamma());
  }
  throw StateError("bucket counts do not cover rank " + std::to_string(rank));
}

}  // namespace udds
