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

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "data_file.hpp"
#include "udds/codec.hpp"
#include "udds/errors.hpp"
#include "udds/evaluation.hpp"
#include "udds/experiment.hpp"
#include "udds/generators.hpp"
#include "udds/merge.hpp"
#include "udds/sketch.hpp"

namespace udds::tools {

namespace {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// Prints a flat JSON object as an aligned two-column table.
void print_pretty(const json& j, std::ostream& out, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      print_pretty(value, out, prefix + key + ".");
    } else {
      out << std::left << std::setw(20) << (prefix + key) << ' ' << value.dump() << '\n';
    }
  }
}

void emit(const json& j, bool pretty, std::ostream& out) {
  if (pretty) {
    print_pretty(j, out);
  } else {
    out << j.dump() << '\n';
  }
}

StreamSpec stream_from_flags(const std::string& dist_name,
                             const std::vector<double>& params,
                             std::uint64_t n, std::uint64_t seed) {
  const Distribution dist = parse_distribution(dist_name);
  if (params.empty()) return reference_stream(dist, n, seed);
  return make_stream_spec(dist, params, n, seed);
}

QuantileSketch load_sketch(const std::string& path) {
  const auto bytes = read_file(path);
  return codec::decode(bytes);
}

std::vector<double> load_values(const std::string& path) {
  const auto bytes = read_file(path);
  return decode_values(bytes);
}

void save_sketch(const std::string& path, const QuantileSketch& sketch) {
  write_file_atomic(path, codec::encode(sketch));
}

struct SketchFlags {
  double alpha = 0.001;
  std::uint32_t buckets = 512;
  std::string policy = "uniform";

  SketchConfig config() const {
    return SketchConfig(alpha, buckets, parse_policy(policy));
  }
};

void add_sketch_flags(CLI::App* cmd, SketchFlags& flags) {
  cmd->add_option("--alpha", flags.alpha, "Initial relative accuracy alpha0")
      ->capture_default_str();
  cmd->add_option("--buckets", flags.buckets, "Maximum number of buckets m")
      ->capture_default_str();
  cmd->add_option("--policy", flags.policy,
                  "Collapse policy: uniform, dd-first, dd-last")
      ->capture_default_str();
}

json report_summary(const AccuracyReport& r, const QuantileSketch& sketch) {
  json j;
  j["n"] = r.n;
  j["policy"] = std::string(to_string(r.policy));
  j["q0_accuracy"] = r.q0_accuracy;
  j["alpha_final"] = r.alpha_final;
  j["max_rel_err"] = r.max_rel_err;
  j["violations"] = r.violations;
  j["epoch"] = r.epoch;
  j["collapses"] = r.collapses;
  j["buckets"] = sketch.size();
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"udds: mergeable relative-error quantile sketches"};
  app.name("udds");
  app.require_subcommand(1);

  // generate
  std::string dist_name;
  std::vector<double> params;
  std::uint64_t n = 0;
  std::uint64_t seed = 1;
  std::string out_path;
  auto* generate = app.add_subcommand("generate", "Write a synthetic UDDV data file");
  generate->add_option("--dist", dist_name,
                       "beta, exponential, lognormal, normal or uniform")
      ->required();
  generate->add_option("--params", params, "Comma-separated parameters")
      ->delimiter(',');
  generate->add_option("--n", n, "Number of values")->required();
  generate->add_option("--seed", seed, "PRNG seed")->capture_default_str();
  generate->add_option("--out", out_path, "Output .uddv path")->required();

  // build
  SketchFlags build_flags;
  std::string in_path;
  std::string build_out;
  auto* build = app.add_subcommand("build", "Build a sketch from a data file");
  add_sketch_flags(build, build_flags);
  build->add_option("--in", in_path, "Input .uddv path")->required();
  build->add_option("--out", build_out, "Output .udds path")->required();

  // merge
  std::string merge_out;
  std::vector<std::string> merge_inputs;
  auto* merge_cmd = app.add_subcommand("merge", "Merge compatible sketch files");
  merge_cmd->add_option("--out", merge_out, "Output .udds path")->required();
  merge_cmd->add_option("inputs", merge_inputs, "Input .udds files")
      ->required()
      ->expected(1, -1);

  // query
  std::vector<double> qs;
  std::string query_sketch;
  auto* query = app.add_subcommand("query", "Print quantile estimates");
  query->add_option("--q", qs, "Quantiles in [0, 1], comma-separated or repeated")
      ->required()
      ->delimiter(',');
  query->add_option("sketch", query_sketch, "Sketch .udds file")->required();

  // evaluate
  std::string eval_data;
  std::string eval_sketch;
  std::size_t eval_grid = 1001;
  std::string eval_format = "json";
  bool eval_pretty = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score a sketch against its data");
  evaluate->add_option("--data", eval_data, "Data .uddv file")->required();
  evaluate->add_option("--sketch", eval_sketch, "Sketch .udds file")->required();
  evaluate->add_option("--grid", eval_grid, "Number of grid quantiles")
      ->capture_default_str();
  evaluate->add_option("--format", eval_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  evaluate->add_flag("--pretty", eval_pretty, "Human-readable summary");

  // simulate
  std::string sim_dist;
  std::vector<double> sim_params;
  std::uint64_t sim_n = 0;
  std::uint64_t sim_seed = 1;
  SketchFlags sim_flags;
  std::size_t procs = 1;
  std::string tree = "balanced";
  std::uint64_t tree_seed = 0;
  std::size_t sim_grid = 1001;
  unsigned threads = 0;
  bool compare_sequential = false;
  bool sim_pretty = false;
  std::string sim_csv;
  auto* simulate = app.add_subcommand("simulate", "Simulated parallel build and reduction");
  simulate->add_option("--dist", sim_dist, "Distribution family")->required();
  simulate->add_option("--params", sim_params, "Comma-separated parameters")
      ->delimiter(',');
  simulate->add_option("--n", sim_n, "Number of values")->required();
  simulate->add_option("--seed", sim_seed, "PRNG seed")->capture_default_str();
  add_sketch_flags(simulate, sim_flags);
  simulate->add_option("--procs", procs, "Number of partitions")->capture_default_str();
  simulate->add_option("--tree", tree, "balanced, linear or random")
      ->capture_default_str();
  simulate->add_option("--tree-seed", tree_seed, "Seed for --tree random");
  simulate->add_option("--grid", sim_grid, "Number of grid quantiles")
      ->capture_default_str();
  simulate->add_option("--threads", threads, "Leaf build threads (0 = auto)");
  simulate->add_flag("--compare-sequential", compare_sequential,
                     "Check the reduction against a single sequential sketch");
  simulate->add_flag("--pretty", sim_pretty, "Human-readable summary");
  simulate->add_option("--csv", sim_csv, "Also write the per-quantile CSV here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "udds: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      const StreamSpec spec = stream_from_flags(dist_name, params, n, seed);
      const GeneratedStream stream = generate_stream(spec);
      write_file_atomic(out_path, encode_values(stream.values));
      json j;
      j["n"] = stream.values.size();
      j["rejected"] = stream.rejected;
      out << j.dump() << '\n';
    } else if (build->parsed()) {
      const SketchConfig config = build_flags.config();
      const std::vector<double> values = load_values(in_path);
      QuantileSketch sketch(config);
      for (double x : values) sketch.insert(x);
      save_sketch(build_out, sketch);
      json j;
      j["n"] = sketch.count();
      j["epoch"] = sketch.epoch();
      j["alpha_final"] = sketch.alpha();
      j["collapses"] = sketch.collapses();
      out << j.dump() << '\n';
    } else if (merge_cmd->parsed()) {
      QuantileSketch acc = load_sketch(merge_inputs.front());
      for (std::size_t i = 1; i < merge_inputs.size(); ++i) {
        acc = udds::merge(acc, load_sketch(merge_inputs[i]));
      }
      save_sketch(merge_out, acc);
      json j;
      j["n"] = acc.count();
      j["epoch"] = acc.epoch();
      j["alpha_final"] = acc.alpha();
      j["buckets"] = acc.size();
      out << j.dump() << '\n';
    } else if (query->parsed()) {
      const QuantileSketch sketch = load_sketch(query_sketch);
      std::ostringstream lines;
      for (double q : qs) {
        lines << format_double(q) << ',' << format_double(sketch.quantile(q)) << '\n';
      }
      out << lines.str();
    } else if (evaluate->parsed()) {
      const QuantileSketch sketch = load_sketch(eval_sketch);
      ExactOracle oracle(load_values(eval_data));
      const AccuracyReport report = error_profile(sketch, oracle, eval_grid);
      if (eval_format == "csv") {
        write_csv(report, out);
      } else {
        json j = report_summary(report, sketch);
        j["dataset_min"] = oracle.min();
        j["dataset_max"] = oracle.max();
        emit(j, eval_pretty, out);
      }
    } else if (simulate->parsed()) {
      const StreamSpec spec = stream_from_flags(sim_dist, sim_params, sim_n, sim_seed);
      const SketchConfig config = sim_flags.config();
      if (procs == 0) throw ParameterError("--procs must be >= 1");
      const ReductionPlan plan{procs, parse_tree_shape(tree), tree_seed};
      ExperimentOptions options;
      options.grid_size = sim_grid;
      options.threads = threads;
      options.compare_sequential = compare_sequential;
      const ExperimentResult result = run_experiment(spec, config, plan, options);
      if (!sim_csv.empty()) {
        std::ostringstream csv;
        write_csv(result.report, csv);
        const std::string s = csv.str();
        write_file_atomic(sim_csv, std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
      }
      emit(json::parse(summary_json(result)), sim_pretty, out);
    }
  } catch (const ParameterError& e) {
    err << "udds: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IncompatibleError& e) {
    err << "udds: incompatible sketches (field " << e.field() << "): " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "udds: " << e.what() << '\n';
    return kExitData;
  } catch (const std::system_error& e) {
    err << "udds: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace udds::tools
