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

#ifndef SCHEDTRACE_REPORTS_H_
#define SCHEDTRACE_REPORTS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "schedtrace/stats.h"
#include "schedtrace/trace_model.h"

namespace schedtrace {

// The four analyses over a SliceSet. Each is a pure function of its inputs;
// all of them fail with FailedPrecondition on a zero-length window. Entity
// rows are ordered tasks ascending, then IRQs ascending.

inline constexpr DurationUs kDefaultSlotWidthUs = 100000;

// Average processor load.

struct LoadRow {
  EntityId entity;
  DurationUs net_us = 0;
  double utilization = 0.0;  // net_us / window duration
  friend bool operator==(const LoadRow&, const LoadRow&) = default;
};

struct LoadReport {
  AnalysisWindow window;
  std::vector<LoadRow> rows;  // entities with non-zero net time
  double idle_fraction = 0.0;
  friend bool operator==(const LoadReport&, const LoadReport&) = default;
};

absl::StatusOr<LoadReport> AverageLoad(const SliceSet& slices);

// Processor utilization per timeslot.

struct SlotShare {
  EntityId entity;
  DurationUs charged_us = 0;
  double fraction = 0.0;  // charged_us / slot span
  friend bool operator==(const SlotShare&, const SlotShare&) = default;
};

struct UtilizationSlot {
  Timestamp start;
  DurationUs span_us = 0;
  // Only the last slot can be partial; its fractions are normalized by its
  // actual span.
  bool partial = false;
  std::vector<SlotShare> shares;  // entities charged within the slot
  friend bool operator==(const UtilizationSlot&,
                         const UtilizationSlot&) = default;
};

struct UtilizationReport {
  DurationUs slot_width_us = kDefaultSlotWidthUs;
  AnalysisWindow range;
  std::vector<UtilizationSlot> slots;
  friend bool operator==(const UtilizationReport&,
                         const UtilizationReport&) = default;
};

// Slots are [range.start + k*w, range.start + (k+1)*w). `zoom` is clipped to
// the window; an empty intersection is a FailedPrecondition. slot_width_us
// must be positive (InvalidArgument otherwise).
absl::StatusOr<UtilizationReport> Utilization(
    const SliceSet& slices,
    DurationUs slot_width_us,
    std::optional<AnalysisWindow> zoom = std::nullopt);

// Task execution-time statistics.

struct DistributionStats {
  SampleSummary summary;
  Histogram histogram;
  // Absent when every sample is zero. Zero samples are excluded from the
  // exponential fit and counted here.
  std::optional<ExponentialFit> exponential;
  std::size_t zero_samples_excluded = 0;
  UniformFit uniform;
  friend bool operator==(const DistributionStats&,
                         const DistributionStats&) = default;
};

struct EntityStats {
  EntityId entity;
  DurationUs net_us = 0;
  double share = 0.0;  // fraction of the window
  std::size_t dispatches = 0;
  // Per dispatch (tasks) or per invocation (IRQs), net of nested IRQ time.
  DistributionStats execution;
  // Deltas between successive schedule-ins. Tasks only, and only with at
  // least two schedule-ins.
  std::optional<DistributionStats> period;
  friend bool operator==(const EntityStats&, const EntityStats&) = default;
};

struct StatsReport {
  AnalysisWindow window;
  std::uint32_t bins = kDefaultHistogramBins;
  std::vector<EntityStats> entities;
  friend bool operator==(const StatsReport&, const StatsReport&) = default;
};

// bins must be positive (InvalidArgument otherwise).
absl::StatusOr<StatsReport> TaskStatistics(
    const SliceSet& slices,
    std::uint32_t bins = kDefaultHistogramBins);

// Raw samples behind TaskStatistics, keyed by entity.
struct EntitySamples {
  EntityId entity;
  std::vector<DurationUs> execution_us;
  std::vector<DurationUs> period_us;
};
std::vector<EntitySamples> CollectSamples(const SliceSet& slices);

// Task execution timeline.

enum class EntityState {
  kRunning,         // task scheduled, no IRQ open
  kPreemptedByIrq,  // task scheduled underneath an open IRQ
  kInactive,
  kActive,  // IRQ handler on the IRQ stack
};

const char* EntityStateName(EntityState state);

struct TimelineSegment {
  EntityState state = EntityState::kInactive;
  Timestamp start;
  Timestamp end;
  friend bool operator==(const TimelineSegment&,
                         const TimelineSegment&) = default;
};

struct EntityTimeline {
  EntityId entity;
  // Tiles the report range; adjacent segments never share a state.
  std::vector<TimelineSegment> segments;
  friend bool operator==(const EntityTimeline&,
                         const EntityTimeline&) = default;
};

struct TimelineReport {
  AnalysisWindow range;
  // Every entity dispatched anywhere in the window, even if it is inactive
  // throughout the zoom range.
  std::vector<EntityTimeline> entities;
  friend bool operator==(const TimelineReport&,
                         const TimelineReport&) = default;
};

absl::StatusOr<TimelineReport> Timeline(
    const SliceSet& slices,
    std::optional<AnalysisWindow> zoom = std::nullopt);

}  // namespace schedtrace

#endif  // SCHEDTRACE_REPORTS_H_
