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

#ifndef SCHEDTRACE_REPORT_RENDER_H_
#define SCHEDTRACE_REPORT_RENDER_H_

#include <optional>
#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "schedtrace/reports.h"

namespace schedtrace {

// Text is an aligned table for people: durations are scaled to us/ms/s and
// task 0 is labelled "idle". CSV and JSON are lossless for times (integer
// microseconds). CSV fractions carry six decimals; JSON numbers use the
// shortest round-trip representation. Output is byte-deterministic.
//
// CSV columns:
//   load         entity,kind,net_us,utilization
//   utilization  slot_start_us,slot_span_us,entity,kind,fraction
//   stats        entity,kind,share,dispatches,min_us,max_us,mean_us,
//                exp_rate_per_us,exp_ks,uni_lower_us,uni_upper_us,uni_ks
//   histograms   entity,kind,series,bin_lower,bin_upper,count
//   timeline     entity,kind,state,start_us,end_us

enum class OutputFormat { kText, kCsv, kJson };

std::optional<OutputFormat> ParseOutputFormat(absl::string_view name);
const char* OutputFormatExtension(OutputFormat format);

std::string Render(const LoadReport& report, OutputFormat format);
std::string Render(const UtilizationReport& report, OutputFormat format);
std::string Render(const StatsReport& report, OutputFormat format);
std::string Render(const TimelineReport& report, OutputFormat format);

// Execution-time and period histograms of a stats report, one row per bin.
std::string RenderHistogramsCsv(const StatsReport& report);

// Inverse of the JSON renders. Fails with InvalidArgument on malformed input.
absl::StatusOr<LoadReport> LoadReportFromJson(absl::string_view json);
absl::StatusOr<UtilizationReport> UtilizationReportFromJson(
    absl::string_view json);
absl::StatusOr<StatsReport> StatsReportFromJson(absl::string_view json);
absl::StatusOr<TimelineReport> TimelineReportFromJson(absl::string_view json);

// "135 us", "29.000 ms", "1.290 s".
std::string FormatDurationHuman(DurationUs us);

}  // namespace schedtrace

#endif  // SCHEDTRACE_REPORT_RENDER_H_
