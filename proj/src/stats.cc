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

#include "schedtrace/stats.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace schedtrace {
namespace {

absl::Status EmptySamples() {
  return absl::FailedPreconditionError("empty sample set");
}

std::vector<double> SortedAsDouble(std::span<const std::uint64_t> samples) {
  std::vector<double> out(samples.begin(), samples.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

absl::StatusOr<SampleSummary> Summarize(
    std::span<const std::uint64_t> samples) {
  if (samples.empty())
    return EmptySamples();
  SampleSummary s;
  s.count = samples.size();
  s.min_us = samples.front();
  s.max_us = samples.front();
  for (std::uint64_t x : samples) {
    s.sum_us += x;
    s.min_us = std::min(s.min_us, x);
    s.max_us = std::max(s.max_us, x);
  }
  s.mean_us = static_cast<double>(s.sum_us) / static_cast<double>(s.count);
  return s;
}

absl::StatusOr<Histogram> MakeHistogram(std::span<const std::uint64_t> samples,
                                        std::uint32_t bins) {
  if (samples.empty())
    return EmptySamples();
  if (bins == 0)
    return absl::InvalidArgumentError("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const std::uint64_t lo = *lo_it;
  const std::uint64_t hi = *hi_it;

  Histogram h;
  if (lo == hi) {
    h.edges = {static_cast<double>(lo), static_cast<double>(lo) + 1.0};
    h.counts = {samples.size()};
    return h;
  }

  const std::uint64_t range = hi - lo;
  h.edges.resize(bins + 1);
  for (std::uint32_t k = 0; k <= bins; ++k) {
    h.edges[k] = static_cast<double>(lo) +
                 static_cast<double>(range) * k / static_cast<double>(bins);
  }
  h.edges[bins] = static_cast<double>(hi);
  h.counts.assign(bins, 0);
  // Integer bin index: floor((x - lo) * bins / range), exact for all inputs.
  for (std::uint64_t x : samples) {
    const unsigned __int128 scaled =
        static_cast<unsigned __int128>(x - lo) * bins / range;
    const std::size_t bin =
        std::min<std::size_t>(static_cast<std::size_t>(scaled), bins - 1);
    ++h.counts[bin];
  }
  return h;
}

absl::StatusOr<ExponentialFit> FitExponential(
    std::span<const std::uint64_t> samples) {
  if (samples.empty())
    return EmptySamples();
  std::uint64_t sum = 0;
  for (std::uint64_t x : samples) {
    if (x == 0) {
      return absl::InvalidArgumentError(
          "exponential fit requires strictly positive samples");
    }
    sum += x;
  }
  const double n = static_cast<double>(samples.size());
  ExponentialFit fit;
  fit.rate_per_us = n / static_cast<double>(sum);
  fit.log_likelihood =
      n * std::log(fit.rate_per_us) - fit.rate_per_us * static_cast<double>(sum);
  const double rate = fit.rate_per_us;
  const std::vector<double> sorted = SortedAsDouble(samples);
  absl::StatusOr<double> ks = KsStatistic(
      sorted, [rate](double x) { return 1.0 - std::exp(-rate * x); });
  if (!ks.ok())
    return ks.status();
  fit.ks = *ks;
  return fit;
}

absl::StatusOr<UniformFit> FitUniform(std::span<const std::uint64_t> samples) {
  if (samples.empty())
    return EmptySamples();
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  UniformFit fit{*lo_it, *hi_it, 0.0};
  if (fit.lower_us == fit.upper_us)
    return fit;
  const double lower = static_cast<double>(fit.lower_us);
  const double span = static_cast<double>(fit.upper_us - fit.lower_us);
  const std::vector<double> sorted = SortedAsDouble(samples);
  absl::StatusOr<double> ks = KsStatistic(
      sorted, [lower, span](double x) { return (x - lower) / span; });
  if (!ks.ok())
    return ks.status();
  fit.ks = *ks;
  return fit;
}

absl::StatusOr<double> KsStatistic(std::span<const double> samples,
                                   absl::FunctionRef<double(double)> cdf) {
  if (samples.empty())
    return EmptySamples();
  std::vector<double> sorted(samples.begin(), samples.end());
  if (!std::is_sorted(sorted.begin(), sorted.end()))
    std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = std::clamp(cdf(sorted[i]), 0.0, 1.0);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, std::abs(above), std::abs(below)});
  }
  return d;
}

}  // namespace schedtrace
