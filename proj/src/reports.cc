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

#include "schedtrace/reports.h"

#include <algorithm>
#include <map>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace schedtrace {
namespace {

absl::Status EmptyWindow() {
  return absl::FailedPreconditionError("empty analysis window");
}

double Fraction(DurationUs part, DurationUs whole) {
  return static_cast<double>(part) / static_cast<double>(whole);
}

absl::StatusOr<AnalysisWindow> ResolveRange(
    const SliceSet& slices,
    const std::optional<AnalysisWindow>& zoom) {
  AnalysisWindow range = slices.window;
  if (zoom) {
    range.start = std::max(zoom->start, slices.window.start);
    range.end = std::min(zoom->end, slices.window.end);
  }
  if (range.start >= range.end)
    return EmptyWindow();
  return range;
}

// Index of the first slice ending after `t`.
std::size_t FirstSliceAfter(const SliceSet& slices, Timestamp t) {
  auto it = std::upper_bound(
      slices.slices.begin(), slices.slices.end(), t,
      [](Timestamp value, const ExecutionSlice& s) { return value < s.end; });
  return static_cast<std::size_t>(it - slices.slices.begin());
}

std::map<EntityId, std::vector<Dispatch>> DispatchesByEntity(
    const SliceSet& slices) {
  std::map<EntityId, std::vector<Dispatch>> by_entity;
  for (const Dispatch& d : slices.dispatches)
    by_entity[d.entity].push_back(d);
  for (auto& [entity, list] : by_entity) {
    std::stable_sort(list.begin(), list.end(),
                     [](const Dispatch& a, const Dispatch& b) {
                       return a.start < b.start;
                     });
  }
  return by_entity;
}

DistributionStats Describe(const std::vector<DurationUs>& samples,
                           std::uint32_t bins) {
  DistributionStats out;
  out.summary = *Summarize(samples);
  out.histogram = *MakeHistogram(samples, bins);
  out.uniform = *FitUniform(samples);
  std::vector<DurationUs> positive;
  positive.reserve(samples.size());
  for (DurationUs x : samples) {
    if (x > 0)
      positive.push_back(x);
  }
  out.zero_samples_excluded = samples.size() - positive.size();
  if (!positive.empty())
    out.exponential = *FitExponential(positive);
  return out;
}

class SegmentBuilder {
 public:
  explicit SegmentBuilder(Timestamp start) : cursor_(start) {}

  void Add(EntityState state, Timestamp start, Timestamp end) {
    if (start > cursor_)
      Append(EntityState::kInactive, cursor_, start);
    Append(state, std::max(start, cursor_), end);
  }

  std::vector<TimelineSegment> Finish(Timestamp end) {
    Append(EntityState::kInactive, cursor_, end);
    return std::move(segments_);
  }

 private:
  void Append(EntityState state, Timestamp start, Timestamp end) {
    if (end <= start)
      return;
    if (!segments_.empty() && segments_.back().state == state &&
        segments_.back().end == start) {
      segments_.back().end = end;
    } else {
      segments_.push_back(TimelineSegment{state, start, end});
    }
    cursor_ = end;
  }

  Timestamp cursor_;
  std::vector<TimelineSegment> segments_;
};

std::vector<TimelineSegment> TaskTimeline(const SliceSet& slices,
                                          EntityId task,
                                          const std::vector<Dispatch>& runs,
                                          const AnalysisWindow& range) {
  SegmentBuilder builder(range.start);
  for (const Dispatch& run : runs) {
    const Timestamp start = std::max(run.start, range.start);
    const Timestamp end = std::min(run.end, range.end);
    if (start >= end)
      continue;
    for (std::size_t j = FirstSliceAfter(slices, start);
         j < slices.slices.size() && slices.slices[j].start < end; ++j) {
      const ExecutionSlice& slice = slices.slices[j];
      builder.Add(slice.entity == task ? EntityState::kRunning
                                       : EntityState::kPreemptedByIrq,
                  std::max(slice.start, start), std::min(slice.end, end));
    }
  }
  return builder.Finish(range.end);
}

std::vector<TimelineSegment> IrqTimeline(
    const std::vector<Dispatch>& invocations,
    const AnalysisWindow& range) {
  SegmentBuilder builder(range.start);
  // Re-entrant invocations of the same handler overlap; the builder merges
  // them since they are added in start order with the same state.
  Timestamp covered = range.start;
  for (const Dispatch& inv : invocations) {
    const Timestamp start = std::max({inv.start, range.start, covered});
    const Timestamp end = std::min(inv.end, range.end);
    if (start >= end)
      continue;
    builder.Add(EntityState::kActive, start, end);
    covered = end;
  }
  return builder.Finish(range.end);
}

}  // namespace

absl::StatusOr<LoadReport> AverageLoad(const SliceSet& slices) {
  if (slices.window.empty())
    return EmptyWindow();
  const DurationUs total = slices.window.duration();
  LoadReport report;
  report.window = slices.window;
  for (const auto& [entity, net] : NetTimes(slices)) {
    const double utilization = Fraction(net, total);
    report.rows.push_back(LoadRow{entity, net, utilization});
    if (entity.is_idle())
      report.idle_fraction = utilization;
  }
  return report;
}

absl::StatusOr<UtilizationReport> Utilization(
    const SliceSet& slices,
    DurationUs slot_width_us,
    std::optional<AnalysisWindow> zoom) {
  if (slot_width_us == 0)
    return absl::InvalidArgumentError("slot width must be at least 1 us");
  absl::StatusOr<AnalysisWindow> range = ResolveRange(slices, zoom);
  if (!range.ok())
    return range.status();

  UtilizationReport report;
  report.slot_width_us = slot_width_us;
  report.range = *range;

  std::size_t j = FirstSliceAfter(slices, range->start);
  for (Timestamp slot_start = range->start; slot_start < range->end;) {
    const DurationUs remaining = range->end - slot_start;
    const DurationUs span = std::min(slot_width_us, remaining);
    const Timestamp slot_end = slot_start + span;

    UtilizationSlot slot;
    slot.start = slot_start;
    slot.span_us = span;
    slot.partial = span < slot_width_us;
    while (j < slices.slices.size() && slices.slices[j].start < slot_end) {
      const ExecutionSlice& s = slices.slices[j];
      const DurationUs overlap =
          std::min(s.end, slot_end) - std::max(s.start, slot_start);
      auto it = std::find_if(
          slot.shares.begin(), slot.shares.end(),
          [&](const SlotShare& share) { return share.entity == s.entity; });
      if (it == slot.shares.end())
        slot.shares.push_back(SlotShare{s.entity, overlap, 0.0});
      else
        it->charged_us += overlap;
      if (s.end > slot_end)
        break;
      ++j;
    }
    std::sort(slot.shares.begin(), slot.shares.end(),
              [](const SlotShare& a, const SlotShare& b) {
                return a.entity < b.entity;
              });
    for (SlotShare& share : slot.shares)
      share.fraction = Fraction(share.charged_us, span);
    report.slots.push_back(std::move(slot));
    slot_start = slot_end;
  }
  return report;
}

std::vector<EntitySamples> CollectSamples(const SliceSet& slices) {
  std::map<std::uint32_t, std::vector<Timestamp>> schedule_ins;
  for (const ScheduleIn& in : slices.schedule_ins)
    schedule_ins[in.task].push_back(in.at);

  std::vector<EntitySamples> out;
  for (const auto& [entity, list] : DispatchesByEntity(slices)) {
    EntitySamples samples;
    samples.entity = entity;
    samples.execution_us.reserve(list.size());
    for (const Dispatch& d : list)
      samples.execution_us.push_back(d.net_us);
    if (entity.is_task()) {
      auto it = schedule_ins.find(entity.id);
      if (it != schedule_ins.end()) {
        const std::vector<Timestamp>& ins = it->second;
        for (std::size_t i = 1; i < ins.size(); ++i)
          samples.period_us.push_back(ins[i] - ins[i - 1]);
      }
    }
    out.push_back(std::move(samples));
  }
  return out;
}

absl::StatusOr<StatsReport> TaskStatistics(const SliceSet& slices,
                                           std::uint32_t bins) {
  if (bins == 0)
    return absl::InvalidArgumentError("histogram needs at least one bin");
  if (slices.window.empty())
    return EmptyWindow();
  const DurationUs total = slices.window.duration();

  StatsReport report;
  report.window = slices.window;
  report.bins = bins;
  for (const EntitySamples& samples : CollectSamples(slices)) {
    EntityStats stats;
    stats.entity = samples.entity;
    stats.dispatches = samples.execution_us.size();
    stats.execution = Describe(samples.execution_us, bins);
    stats.net_us = stats.execution.summary.sum_us;
    stats.share = Fraction(stats.net_us, total);
    if (!samples.period_us.empty())
      stats.period = Describe(samples.period_us, bins);
    report.entities.push_back(std::move(stats));
  }
  return report;
}

const char* EntityStateName(EntityState state) {
  switch (state) {
    case EntityState::kRunning:
      return "running";
    case EntityState::kPreemptedByIrq:
      return "preempted_by_irq";
    case EntityState::kInactive:
      return "inactive";
    case EntityState::kActive:
      return "active";
  }
  return "?";
}

absl::StatusOr<TimelineReport> Timeline(const SliceSet& slices,
                                        std::optional<AnalysisWindow> zoom) {
  absl::StatusOr<AnalysisWindow> range = ResolveRange(slices, zoom);
  if (!range.ok())
    return range.status();

  TimelineReport report;
  report.range = *range;
  for (const auto& [entity, list] : DispatchesByEntity(slices)) {
    EntityTimeline timeline;
    timeline.entity = entity;
    timeline.segments = entity.is_task()
                            ? TaskTimeline(slices, entity, list, *range)
                            : IrqTimeline(list, *range);
    report.entities.push_back(std::move(timeline));
  }
  return report;
}

}  // namespace schedtrace
