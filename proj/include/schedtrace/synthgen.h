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

#ifndef SCHEDTRACE_SYNTHGEN_H_
#define SCHEDTRACE_SYNTHGEN_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "schedtrace/trace_model.h"

namespace schedtrace {

// Synthetic traces with known ground truth.
//
// A scenario is a literal schedule: tasks run back to back for a gross
// duration each, and IRQs fire at offsets inside a run. Script format:
//
//   # comment
//   start 1290602        optional, absolute start in us (default 0)
//   prior 5              optional, `old` task of the first switch (default 0)
//   final 3              optional, task switched in at the end (default 0)
//   run 4 158            task 4 runs for 158 us
//     irq 16 74 23       IRQ 16 fires 74 us into the run for 23 us
//
// IRQ intervals must lie strictly inside their run, have positive length and
// be either separated by a gap or strictly nested, so that no two emitted
// events share a timestamp.

struct IrqSpec {
  std::uint32_t irq = 0;
  DurationUs offset_us = 0;  // from run start
  DurationUs length_us = 0;
  friend bool operator==(const IrqSpec&, const IrqSpec&) = default;
};

struct Run {
  std::uint32_t task = 0;
  DurationUs gross_us = 0;
  std::vector<IrqSpec> irqs;
  friend bool operator==(const Run&, const Run&) = default;
};

struct Scenario {
  Timestamp start;
  std::uint32_t prior_task = 0;
  std::uint32_t final_task = 0;
  std::vector<Run> runs;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Expected analyzer output for a scenario, computed without replaying events.
struct Manifest {
  DurationUs window_us = 0;
  std::map<EntityId, DurationUs> net_us;
  // Per task dispatch or per IRQ invocation, in start order.
  std::map<EntityId, std::vector<DurationUs>> execution_us;
  // Successive schedule-in deltas, tasks with at least two schedule-ins.
  std::map<EntityId, std::vector<DurationUs>> period_us;
};

struct GeneratedTrace {
  std::string text;
  Manifest manifest;
};

struct RandomScenarioOptions {
  std::uint32_t tasks = 4;  // ids 0..tasks-1, task 0 being idle
  std::uint32_t runs = 100;
  DurationUs max_gross_us = 1000;
  // Chance of each further IRQ being placed in a run (or nested in an IRQ).
  double irq_probability = 0.3;
  std::uint32_t irq_ids = 32;
};

// InvalidArgument naming the first violated constraint.
absl::Status ValidateScenario(const Scenario& scenario);

// InvalidArgument with "line N: ..." on syntax or constraint errors.
absl::StatusOr<Scenario> ParseScript(absl::string_view text);

// Renders the scenario in the trace format and computes its manifest.
// OutOfRange if the schedule runs past 9999h.
absl::StatusOr<GeneratedTrace> GenerateTrace(const Scenario& scenario);

// Deterministic for a given seed and options; the result always validates.
Scenario RandomScenario(std::uint64_t seed, const RandomScenarioOptions& options);

// entity,kind,net_us rows followed by a `window_us,,N` footer.
std::string RenderManifestCsv(const Manifest& manifest);

}  // namespace schedtrace

#endif  // SCHEDTRACE_SYNTHGEN_H_
