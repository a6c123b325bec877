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

// Seeded synthetic streams with strictly positive support.
//
// Every stream is driven by one SplitMix64 seeded with StreamSpec::seed, and
// each family uses a fixed algorithm so sequences are reproducible elsewhere:
//
//   uniform(lo, hi)          lo + (hi - lo) * U,  U = next_double() in [0, 1)
//   exponential(rate)        -ln(V) / rate,       V = next_open_double() in (0, 1)
//   normal(mean, sd)         mean + sd * Z, Z from the Marsaglia polar method
//                            (both deviates of a pair are used, first u then v)
//   lognormal(meanlog, sd)   exp(meanlog + sd * Z)
//   beta(a, b)               X / (X + Y), X ~ Gamma(a), Y ~ Gamma(b) drawn in
//                            that order with Marsaglia-Tsang; shape < 1 uses
//                            Gamma(shape + 1) * V^(1 / shape)
//
// Draws that are not finite and > 0 are discarded, redrawn and counted.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace udds {

enum class Distribution { kBeta, kExponential, kLognormal, kNormal, kUniform };

inline constexpr std::array<Distribution, 5> kAllDistributions = {
    Distribution::kBeta, Distribution::kExponential, Distribution::kLognormal,
    Distribution::kNormal, Distribution::kUniform};

std::string_view to_string(Distribution dist);
Distribution parse_distribution(std::string_view name);

struct StreamSpec {
  Distribution dist = Distribution::kUniform;
  /// Family parameters in the order listed above; exponential uses only p1.
  double p1 = 0.0;
  double p2 = 0.0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

/// Parameters of the five reference datasets: Beta(5, 1.5), Exp(rate 3.5),
/// Lognormal(1, 1.5), N(1e6, 20000), Unif(5, 1e6).
StreamSpec reference_stream(Distribution dist, std::uint64_t n,
                            std::uint64_t seed);

/// Builds a spec from a parameter list; throws ParameterError on a wrong
/// arity or invalid values.
StreamSpec make_stream_spec(Distribution dist, std::span<const double> params,
                            std::uint64_t n, std::uint64_t seed);

/// Throws ParameterError for parameters that are out of range or cannot keep
/// the support positive (uniform hi <= 0, normal mean <= 0).
void validate(const StreamSpec& spec);

struct GeneratedStream {
  std::vector<double> values;
  std::uint64_t rejected = 0;
};

GeneratedStream generate_stream(const StreamSpec& spec);

}  // namespace udds
