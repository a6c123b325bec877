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

#include "udds/generators.hpp"

#include <cmath>
#include <optional>
#include <string>

#include "udds/errors.hpp"
#include "udds/random.hpp"

namespace udds {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * rng_.next_double(); }

  double exponential(double rate) { return -std::log(rng_.next_open_double()) / rate; }

  double standard_normal() {
    if (spare_) {
      const double z = *spare_;
      spare_.reset();
      return z;
    }
    double u, v, s;
    do {
      u = 2.0 * rng_.next_double() - 1.0;
      v = 2.0 * rng_.next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    return u * f;
  }

  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(rng_.next_open_double(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      const double z = standard_normal();
      double v = 1.0 + c * z;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = rng_.next_open_double();
      if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

 private:
  SplitMix64 rng_;
  std::optional<double> spare_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

std::string_view to_string(Distribution dist) {
  switch (dist) {
    case Distribution::kBeta:
      return "beta";
    case Distribution::kExponential:
      return "exponential";
    case Distribution::kLognormal:
      return "lognormal";
    case Distribution::kNormal:
      return "normal";
    case Distribution::kUniform:
      return "uniform";
  }
  return "unknown";
}

Distribution parse_distribution(std::string_view name) {
  for (Distribution d : kAllDistributions) {
    if (name == to_string(d)) return d;
  }
  if (name == "exp") return Distribution::kExponential;
  if (name == "unif") return Distribution::kUniform;
  throw ParameterError("unknown distribution: " + std::string(name));
}

StreamSpec reference_stream(Distribution dist, std::uint64_t n,
                            std::uint64_t seed) {
  StreamSpec spec{dist, 0.0, 0.0, n, seed};
  switch (dist) {
    case Distribution::kBeta:
      spec.p1 = 5.0;
      spec.p2 = 1.5;
      break;
    case Distribution::kExponential:
      spec.p1 = 3.5;
      break;
    case Distribution::kLognormal:
      spec.p1 = 1.0;
      spec.p2 = 1.5;
      break;
    case Distribution::kNormal:
      spec.p1 = 1.0e6;
      spec.p2 = 20000.0;
      break;
    case Distribution::kUniform:
      spec.p1 = 5.0;
      spec.p2 = 1.0e6;
      break;
  }
  return spec;
}

StreamSpec make_stream_spec(Distribution dist, std::span<const double> params,
                            std::uint64_t n, std::uint64_t seed) {
  const std::size_t arity = dist == Distribution::kExponential ? 1 : 2;
  require(params.size() == arity,
          std::string(to_string(dist)) + " takes " + std::to_string(arity) +
              " parameter(s), got " + std::to_string(params.size()));
  StreamSpec spec{dist, params[0], arity == 2 ? params[1] : 0.0, n, seed};
  validate(spec);
  return spec;
}

void validate(const StreamSpec& spec) {
  require(std::isfinite(spec.p1) && std::isfinite(spec.p2),
          "distribution parameters must be finite");
  switch (spec.dist) {
    case Distribution::kBeta:
      require(spec.p1 > 0.0 && spec.p2 > 0.0, "beta needs a > 0 and b > 0");
      break;
    case Distribution::kExponential:
      require(spec.p1 > 0.0, "exponential needs rate > 0");
      break;
    case Distribution::kLognormal:
      require(spec.p2 > 0.0, "lognormal needs sdlog > 0");
      break;
    case Distribution::kNormal:
      require(spec.p2 > 0.0, "normal needs sd > 0");
      require(spec.p1 > 0.0, "normal needs mean > 0 to keep a positive support");
      break;
    case Distribution::kUniform:
      require(spec.p1 < spec.p2, "uniform needs lo < hi");
      require(spec.p2 > 0.0, "uniform needs hi > 0 to keep a positive support");
      break;
  }
}

GeneratedStream generate_stream(const StreamSpec& spec) {
  validate(spec);
  GeneratedStream out;
  out.values.reserve(spec.n);
  Sampler s(spec.seed);

  auto draw = [&]() -> double {
    switch (spec.dist) {
      case Distribution::kBeta:
        return s.beta(spec.p1, spec.p2);
      case Distribution::kExponential:
        return s.exponential(spec.p1);
      case Distribution::kLognormal:
        return std::exp(spec.p1 + spec.p2 * s.standard_normal());
      case Distribution::kNormal:
        return spec.p1 + spec.p2 * s.standard_normal();
      case Distribution::kUniform:
        return s.uniform(spec.p1, spec.p2);
    }
    return 0.0;
  };

  while (out.values.size() < spec.n) {
    const double x = draw();
    if (x > 0.0 && std::isfinite(x)) {
      out.values.push_back(x);
    } else {
      ++out.rejected;
    }
  }
  return out;
}

}  // namespace udds
