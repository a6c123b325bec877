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

#include "udds/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "udds/errors.hpp"

namespace udds {

namespace {

void put_double(std::ostream& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, end - buf);
}

}  // namespace

double exact_quantile(std::span<const double> data, double q) {
  if (data.empty()) throw StateError("quantile of an empty dataset");
  const std::uint64_t rank = lower_rank(q, data.size());
  std::vector<double> copy(data.begin(), data.end());
  auto nth = copy.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(copy.begin(), nth, copy.end());
  return *nth;
}

ExactOracle::ExactOracle(std::vector<double> data) : sorted_(std::move(data)) {
  if (sorted_.empty()) throw StateError("oracle over an empty dataset");
  std::sort(sorted_.begin(), sorted_.end());
}

double ExactOracle::quantile(double q) const {
  return sorted_[lower_rank(q, sorted_.size()) - 1];
}

std::vector<double> quantile_grid(std::size_t grid_size) {
  if (grid_size < 2) throw ParameterError("grid needs at least two points");
  std::vector<double> grid(grid_size);
  const double last = static_cast<double>(grid_size - 1);
  for (std::size_t k = 0; k < grid_size; ++k) {
    grid[k] = static_cast<double>(k) / last;
  }
  return grid;
}

AccuracyReport error_profile(const QuantileSketch& sketch,
                             const ExactOracle& oracle, std::size_t grid_size) {
  if (sketch.count() != oracle.size()) {
    throw ConsistencyError("sketch holds " + std::to_string(sketch.count()) +
                           " items, dataset has " +
                           std::to_string(oracle.size()));
  }
  AccuracyReport r;
  r.grid = quantile_grid(grid_size);
  r.policy = sketch.config().policy();
  r.n = sketch.count();
  r.alpha0 = sketch.config().alpha0();
  r.alpha_final = sketch.alpha();
  r.collapses = sketch.collapses();
  r.epoch = sketch.epoch();

  r.estimates.reserve(grid_size);
  r.exact.reserve(grid_size);
  r.rel_err.reserve(grid_size);
  for (double q : r.grid) {
    const double est = sketch.quantile(q);
    const double truth = oracle.quantile(q);
    const double err = std::fabs(est - truth) / truth;
    r.estimates.push_back(est);
    r.exact.push_back(truth);
    r.rel_err.push_back(err);
    r.max_rel_err = std::max(r.max_rel_err, err);
    if (err > r.alpha_final) ++r.violations;
  }
  r.q0_accuracy = q0_accuracy(r);
  return r;
}

AccuracyReport error_profile(const QuantileSketch& sketch,
                             std::span<const double> data,
                             std::size_t grid_size) {
  return error_profile(sketch, ExactOracle({data.begin(), data.end()}),
                       grid_size);
}

double alpha_target(const AccuracyReport& report) {
  return report.policy == CollapsePolicy::kUniform ? report.alpha_final
                                                   : report.alpha0;
}

double q0_accuracy(const AccuracyReport& report) {
  if (report.grid.size() < 2 || report.rel_err.size() != report.grid.size()) {
    throw ParameterError("report is not populated");
  }
  const double target = alpha_target(report);
  const std::size_t k = report.grid.size();
  std::size_t first_ok = k;
  while (first_ok > 0 && report.rel_err[first_ok - 1] <= target) --first_ok;
  if (first_ok == k) {
    return 1.0 + 1.0 / static_cast<double>(k - 1);
  }
  return report.grid[first_ok];
}

double gamma_bound(std::uint32_t max_buckets, double min_value,
                   double max_value) {
  if (max_buckets < 2) throw ParameterError("max_buckets must be >= 2");
  if (!(min_value > 0.0) || !(max_value >= min_value)) {
    throw ParameterError("gamma bound needs 0 < min <= max");
  }
  return std::pow(max_value / min_value,
                  2.0 / static_cast<double>(max_buckets - 1));
}

bool satisfies_gamma_bound(const QuantileSketch& sketch) {
  if (sketch.epoch() == 0) return true;
  // Nothing observed: the epoch came from alignment alone.
  if (!sketch.min_seen() || !sketch.max_seen()) return sketch.empty();
  return sketch.gamma() <= gamma_bound(sketch.config().max_buckets(),
                                       *sketch.min_seen(), *sketch.max_seen());
}

void write_csv(const AccuracyReport& report, std::ostream& out) {
  out << "q,estimate,exact,rel_err\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    put_double(out, report.grid[i]);
    out << ',';
    put_double(out, report.estimates[i]);
    out << ',';
    put_double(out, report.exact[i]);
    out << ',';
    put_double(out, report.rel_err[i]);
    out << '\n';
  }
}

}  // namespace udds
