/*
 * Copyright (C) 2026 The Schedtrace Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SCHEDTRACE_STATS_H_
#define SCHEDTRACE_STATS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/functional/function_ref.h"
#include "absl/status/statusor.h"

namespace schedtrace {

// Sample statistics over integer microsecond samples. Every function fails
// with FailedPrecondition on an empty sample set.

inline constexpr std::uint32_t kDefaultHistogramBins = 20;

struct SampleSummary {
  std::size_t count = 0;
  std::uint64_t sum_us = 0;
  std::uint64_t min_us = 0;
  std::uint64_t max_us = 0;  // worst case
  double mean_us = 0.0;
  friend bool operator==(const SampleSummary&, const SampleSummary&) = default;
};

// Equal-width bins over [min, max]. Sample x lands in bin
// floor((x - min) / width) and x == max lands in the last bin. When
// min == max there is a single bin [min, min + 1) regardless of the requested
// bin count.
struct Histogram {
  std::vector<double> edges;  // counts.size() + 1, strictly increasing
  std::vector<std::uint64_t> counts;
  friend bool operator==(const Histogram&, const Histogram&) = default;
};

struct ExponentialFit {
  double rate_per_us = 0.0;  // maximum likelihood: 1 / mean
  double log_likelihood = 0.0;
  double ks = 0.0;
  friend bool operator==(const ExponentialFit&,
                         const ExponentialFit&) = default;
};

struct UniformFit {
  std::uint64_t lower_us = 0;
  std::uint64_t upper_us = 0;
  double ks = 0.0;  // 0 when lower == upper
  friend bool operator==(const UniformFit&, const UniformFit&) = default;
};

absl::StatusOr<SampleSummary> Summarize(std::span<const std::uint64_t> samples);

// Fails with InvalidArgument when bins == 0.
absl::StatusOr<Histogram> MakeHistogram(std::span<const std::uint64_t> samples,
                                        std::uint32_t bins);

// Fails with InvalidArgument if any sample is zero.
absl::StatusOr<ExponentialFit> FitExponential(
    std::span<const std::uint64_t> samples);

absl::StatusOr<UniformFit> FitUniform(std::span<const std::uint64_t> samples);

// One-sample Kolmogorov-Smirnov distance between the empirical distribution
// of `samples` and `cdf`:
//   max_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|) over sorted x_1..x_n.
absl::StatusOr<double> KsStatistic(std::span<const double> samples,
                                   absl::FunctionRef<double(double)> cdf);

}  // namespace schedtrace

#endif  // SCHEDTRACE_STATS_H_
