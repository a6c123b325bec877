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

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "udds/sketch.hpp"

namespace udds {

/// Lower q-quantile of `data` (rank floor(1 + q (n - 1)), 1-based) by
/// selection. Throws StateError on empty data.
double exact_quantile(std::span<const double> data, double q);

/// Sorted copy of a dataset answering exact lower quantiles in O(1).
class ExactOracle {
 public:
  explicit ExactOracle(std::vector<double> data);

  double quantile(double q) const;
  std::size_t size() const noexcept { return sorted_.size(); }
  double min() const { return sorted_.front(); }
  double max() const { return sorted_.back(); }
  std::span<const double> sorted() const noexcept { return sorted_; }

 private:
  std::vector<double> sorted_;
};

/// {0, 1/(k-1), ..., 1}. Throws ParameterError for k < 2.
std::vector<double> quantile_grid(std::size_t grid_size);

struct AccuracyReport {
  std::vector<double> grid;
  std::vector<double> estimates;
  std::vector<double> exact;
  std::vector<double> rel_err;

  CollapsePolicy policy = CollapsePolicy::kUniform;
  std::uint64_t n = 0;
  double alpha0 = 0.0;
  double alpha_final = 0.0;
  double max_rel_err = 0.0;
  /// Grid points whose relative error exceeds alpha_final.
  std::size_t violations = 0;
  double q0_accuracy = 0.0;
  std::uint64_t collapses = 0;
  std::uint32_t epoch = 0;
  std::uint64_t merge_bucket_ops = 0;
};

/// Evaluates the sketch against the oracle over quantile_grid(grid_size).
/// Throws ConsistencyError if the sketch and oracle disagree on n.
AccuracyReport error_profile(const QuantileSketch& sketch,
                             const ExactOracle& oracle, std::size_t grid_size);
AccuracyReport error_profile(const QuantileSketch& sketch,
                             std::span<const double> data,
                             std::size_t grid_size);

/// The accuracy a policy promises: alpha_final for uniform collapse, alpha0
/// for the fixed-gamma policies.
double alpha_target(const AccuracyReport& report);

/// Smallest grid q0 such that every grid q >= q0 is within alpha_target.
/// Returns 1 + grid step when even q = 1 fails.
double q0_accuracy(const AccuracyReport& report);

/// (max / min)^(2 / (m - 1)).
double gamma_bound(std::uint32_t max_buckets, double min_value, double max_value);

/// True when the sketch never collapsed uniformly, or its gamma is within
/// gamma_bound of its observed extremes.
bool satisfies_gamma_bound(const QuantileSketch& sketch);

/// CSV with header `q,estimate,exact,rel_err`, one row per grid point.
void write_csv(const AccuracyReport& report, std::ostream& out);

}  // namespace udds
