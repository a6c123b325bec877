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

// End-to-end simulated parallel run: generate, partition, build one sketch per
// partition, reduce over a merge tree, then score the result against the
// exact oracle on the whole dataset.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "udds/evaluation.hpp"
#include "udds/generators.hpp"
#include "udds/merge.hpp"
#include "udds/sketch.hpp"

namespace udds {

struct ExperimentOptions {
  std::size_t grid_size = 1001;
  /// Worker threads for leaf builds; 0 picks hardware concurrency.
  unsigned threads = 0;
  /// Also build the single-sketch result and compare it with the reduction.
  bool compare_sequential = false;
};

struct PhaseTimings {
  double generate_s = 0.0;
  double build_s = 0.0;
  double reduce_s = 0.0;
  double oracle_s = 0.0;
  double total_s = 0.0;
};

struct ExperimentResult {
  StreamSpec spec;
  SketchConfig config;
  ReductionPlan plan;
  QuantileSketch sketch;
  AccuracyReport report;
  PhaseTimings timings;
  std::uint64_t rejected = 0;
  double data_min = 0.0;
  double data_max = 0.0;
  /// Collapses summed over the leaf sketches before any merge.
  std::uint64_t leaf_collapses = 0;
  std::size_t merges = 0;
  std::uint64_t merge_bucket_ops = 0;
  std::uint64_t max_merge_ops = 0;
  std::optional<bool> identical_to_sequential;
};

/// One sketch per contiguous partition. Output does not depend on `threads`.
std::vector<QuantileSketch> build_leaves(std::span<const double> data,
                                         const SketchConfig& config,
                                         const PartitionLayout& layout,
                                         unsigned threads = 1);

QuantileSketch build_sketch(std::span<const double> data,
                            const SketchConfig& config);

ExperimentResult run_experiment(const StreamSpec& spec,
                                const SketchConfig& config,
                                const ReductionPlan& plan,
                                const ExperimentOptions& options = {});

/// Same as run_experiment on an existing dataset; `rejected` is reported as 0.
ExperimentResult run_experiment_on(std::vector<double> data,
                                   const StreamSpec& spec,
                                   const SketchConfig& config,
                                   const ReductionPlan& plan,
                                   const ExperimentOptions& options = {});

/// JSON object: q0_accuracy, alpha_final, epoch, collapses, timings, dataset
/// min/max and the run parameters.
std::string summary_json(const ExperimentResult& result);

}  // namespace udds
