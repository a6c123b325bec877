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

#include "udds/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "udds/errors.hpp"

namespace udds {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string_view tree_name(TreeShape shape) {
  switch (shape) {
    case TreeShape::kBalanced:
      return "balanced";
    case TreeShape::kLinear:
      return "linear";
    case TreeShape::kRandom:
      return "random";
  }
  return "unknown";
}

}  // namespace

QuantileSketch build_sketch(std::span<const double> data,
                            const SketchConfig& config) {
  QuantileSketch sketch(config);
  for (double x : data) sketch.insert(x);
  return sketch;
}

std::vector<QuantileSketch> build_leaves(std::span<const double> data,
                                         const SketchConfig& config,
                                         const PartitionLayout& layout,
                                         unsigned threads) {
  if (layout.n != data.size()) {
    throw ConsistencyError("layout covers " + std::to_string(layout.n) +
                           " items, data has " + std::to_string(data.size()));
  }
  const std::vector<std::uint64_t> offsets = layout.offsets();
  const std::size_t p = layout.sizes.size();
  std::vector<QuantileSketch> leaves(p, QuantileSketch(config));

  auto build_one = [&](std::size_t i) {
    leaves[i] = build_sketch(data.subspan(offsets[i], layout.sizes[i]), config);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(threads, p);
  if (workers <= 1) {
    for (std::size_t i = 0; i < p; ++i) build_one(i);
    return leaves;
  }

  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < p; i += workers) build_one(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return leaves;
}

ExperimentResult run_experiment_on(std::vector<double> data,
                                   const StreamSpec& spec,
                                   const SketchConfig& config,
                                   const ReductionPlan& plan,
                                   const ExperimentOptions& options) {
  if (data.empty()) throw StateError("experiment needs at least one item");
  const auto start = Clock::now();

  auto t = Clock::now();
  const PartitionLayout layout = partition_stream(data.size(), plan.p);
  std::vector<QuantileSketch> leaves =
      build_leaves(data, config, layout, options.threads);
  const double build_s = seconds_since(t);

  std::uint64_t leaf_collapses = 0;
  for (const auto& leaf : leaves) leaf_collapses += leaf.collapses();

  t = Clock::now();
  ReduceResult reduced = reduce_instrumented(leaves, plan);
  const double reduce_s = seconds_since(t);

  std::optional<bool> identical;
  if (options.compare_sequential) {
    identical = build_sketch(data, config) == reduced.sketch;
  }

  t = Clock::now();
  ExactOracle oracle(std::move(data));
  AccuracyReport report = error_profile(reduced.sketch, oracle, options.grid_size);
  report.merge_bucket_ops = reduced.bucket_ops;
  const double oracle_s = seconds_since(t);

  ExperimentResult result{
      .spec = spec,
      .config = config,
      .plan = plan,
      .sketch = std::move(reduced.sketch),
      .report = std::move(report),
      .timings = {},
      .rejected = 0,
      .data_min = oracle.min(),
      .data_max = oracle.max(),
      .leaf_collapses = leaf_collapses,
      .merges = reduced.merges,
      .merge_bucket_ops = reduced.bucket_ops,
      .max_merge_ops = reduced.max_merge_ops,
      .identical_to_sequential = identical,
  };
  result.timings.build_s = build_s;
  result.timings.reduce_s = reduce_s;
  result.timings.oracle_s = oracle_s;
  result.timings.total_s = seconds_since(start);
  return result;
}

ExperimentResult run_experiment(const StreamSpec& spec,
                                const SketchConfig& config,
                                const ReductionPlan& plan,
                                const ExperimentOptions& options) {
  const auto start = Clock::now();
  GeneratedStream stream = generate_stream(spec);
  const double generate_s = seconds_since(start);

  ExperimentResult result =
      run_experiment_on(std::move(stream.values), spec, config, plan, options);
  result.rejected = stream.rejected;
  result.timings.generate_s = generate_s;
  result.timings.total_s += generate_s;
  return result;
}

std::string summary_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["distribution"] = std::string(to_string(r.spec.dist));
  j["params"] = r.spec.dist == Distribution::kExponential
                    ? nlohmann::ordered_json::array({r.spec.p1})
                    : nlohmann::ordered_json::array({r.spec.p1, r.spec.p2});
  j["n"] = r.report.n;
  j["seed"] = r.spec.seed;
  j["policy"] = std::string(to_string(r.config.policy()));
  j["alpha0"] = r.config.alpha0();
  j["m"] = r.config.max_buckets();
  j["procs"] = r.plan.p;
  j["tree"] = std::string(tree_name(r.plan.shape));
  j["q0_accuracy"] = r.report.q0_accuracy;
  j["alpha_final"] = r.report.alpha_final;
  j["max_rel_err"] = r.report.max_rel_err;
  j["violations"] = r.report.violations;
  j["epoch"] = r.sketch.epoch();
  j["buckets"] = r.sketch.size();
  j["collapses"] = r.sketch.collapses();
  j["leaf_collapses"] = r.leaf_collapses;
  j["merges"] = r.merges;
  j["merge_bucket_ops"] = r.merge_bucket_ops;
  j["max_merge_ops"] = r.max_merge_ops;
  j["rejected"] = r.rejected;
  j["dataset_min"] = r.data_min;
  j["dataset_max"] = r.data_max;
  j["timings"] = {
      {"generate_s", r.timings.generate_s}, {"build_s", r.timings.build_s},
      {"reduce_s", r.timings.reduce_s},     {"oracle_s", r.timings.oracle_s},
      {"total_s", r.timings.total_s},
  };
  if (r.identical_to_sequential) j["identical"] = *r.identical_to_sequential;
  return j.dump();
}

}  // namespace udds
