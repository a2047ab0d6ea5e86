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

#include <map>
#include <numeric>

#include <gtest/gtest.h>

#include "schedtrace/execution_builder.h"
#include "schedtrace/synthgen.h"
#include "schedtrace/trace_parser.h"
#include "test_oracles.h"

namespace schedtrace {
namespace {

using ::schedtrace::testing::ChargePerMicrosecond;
using ::schedtrace::testing::ReadTestData;

constexpr std::uint64_t kSampleStart = 1290602;

SliceSet BuildOrDie(const EventLog& log) {
  absl::StatusOr<SliceSet> s = BuildSlices(log, ReplayMode::kStrict);
  EXPECT_TRUE(s.ok()) << s.status();
  return *s;
}

EventLog SampleLog() {
  return *ParseTrace(ReadTestData("sample.trace"), ParseMode::kStrict);
}

EventLog GeneratedLog(std::uint64_t seed, RandomScenarioOptions options = {}) {
  absl::StatusOr<GeneratedTrace> g =
      GenerateTrace(RandomScenario(seed, options));
  EXPECT_TRUE(g.ok());
  return *ParseTrace(g->text, ParseMode::kStrict);
}

SliceSet SingleTask(std::uint32_t task, std::uint64_t length) {
  EventLog log;
  log.events = {{Timestamp(0), TaskSchedule{0, task}},
                {Timestamp(length), TaskSchedule{task, 0}}};
  return BuildOrDie(log);
}

// Per-microsecond scheduler state: scheduled task and IRQ stack.
struct MicroState {
  std::uint32_t task = 0;
  std::vector<std::uint32_t> irqs;
};

std::vector<MicroState> StatePerMicrosecond(const EventLog& log) {
  MicroState state;
  for (const TraceEvent& e : log.events) {
    if (const auto* s = std::get_if<TaskSchedule>(&e.payload)) {
      state.task = s->old_task;
      break;
    }
  }
  std::vector<MicroState> out;
  std::size_t next = 0;
  for (std::uint64_t t = log.events.front().at.micros();
       t < log.events.back().at.micros(); ++t) {
    while (next < log.events.size() && log.events[next].at.micros() <= t) {
      const EventPayload& p = log.events[next].payload;
      if (const auto* s = std::get_if<TaskSchedule>(&p))
        state.task = s->new_task;
      else if (const auto* b = std::get_if<IrqBegin>(&p))
        state.irqs.push_back(b->irq);
      else
        state.irqs.pop_back();
      ++next;
    }
    out.push_back(state);
  }
  return out;
}

EntityState ExpectedState(const MicroState& m, EntityId e) {
  if (e.is_task()) {
    if (m.task != e.id)
      return EntityState::kInactive;
    return m.irqs.empty() ? EntityState::kRunning
                          : EntityState::kPreemptedByIrq;
  }
  return std::find(m.irqs.begin(), m.irqs.end(), e.id) != m.irqs.end()
             ? EntityState::kActive
             : EntityState::kInactive;
}

TEST(AverageLoadTest, SampleTrace) {
  absl::StatusOr<LoadReport> r = AverageLoad(BuildOrDie(SampleLog()));
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->rows.size(), 7u);
  std::map<EntityId, LoadRow> rows;
  for (const LoadRow& row : r->rows)
    rows[row.entity] = row;
  EXPECT_DOUBLE_EQ(rows[EntityId::Task(5)].utilization, 182.0 / 628);
  EXPECT_DOUBLE_EQ(rows[EntityId::Task(4)].utilization, 135.0 / 628);
  EXPECT_DOUBLE_EQ(rows[EntityId::Irq(16)].utilization, 23.0 / 628);
  EXPECT_NEAR(rows[EntityId::Task(5)].utilization, 0.2898, 5e-5);
  EXPECT_NEAR(rows[EntityId::Task(4)].utilization, 0.2150, 5e-5);
  EXPECT_NEAR(rows[EntityId::Irq(16)].utilization, 0.0366, 5e-5);
  EXPECT_EQ(r->idle_fraction, 0.0);
  double sum = 0;
  for (const LoadRow& row : r->rows)
    sum += row.utilization;
  EXPECT_NEAR(sum, 1.0, 1e-9);
  // Tasks ascending, then IRQs.
  EXPECT_EQ(r->rows.front().entity, EntityId::Task(1));
  EXPECT_EQ(r->rows.back().entity, EntityId::Irq(23));
}

TEST(AverageLoadTest, SingleTaskAndIdle) {
  absl::StatusOr<LoadReport> r = AverageLoad(SingleTask(7, 100));
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->rows.size(), 1u);
  EXPECT_EQ(r->rows[0], (LoadRow{EntityId::Task(7), 100, 1.0}));
  EXPECT_EQ(r->idle_fraction, 0.0);

  EventLog log;
  log.events = {{Timestamp(0), TaskSchedule{0, 2}},
                {Timestamp(30), TaskSchedule{2, 0}},
                {Timestamp(100), TaskSchedule{0, 2}}};
  EXPECT_DOUBLE_EQ(AverageLoad(BuildOrDie(log))->idle_fraction, 0.7);
}

TEST(AverageLoadTest, PercentageShape) {
  // A task holding 36.85% of the window shows up as fraction 0.3685.
  EventLog log;
  log.events = {{Timestamp(0), TaskSchedule{0, 9}},
                {Timestamp(3685), TaskSchedule{9, 0}},
                {Timestamp(10000), TaskSchedule{0, 9}}};
  absl::StatusOr<LoadReport> r = AverageLoad(BuildOrDie(log));
  ASSERT_TRUE(r.ok());
  EXPECT_DOUBLE_EQ(r->rows[1].utilization, 0.3685);
}

TEST(AverageLoadTest, EmptyWindow) {
  EventLog log;
  log.events = {{Timestamp(5), TaskSchedule{0, 1}}};
  EXPECT_EQ(AverageLoad(BuildOrDie(log)).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(TaskStatistics(BuildOrDie(log)).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(Timeline(BuildOrDie(log)).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(Utilization(BuildOrDie(log), 10).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(UtilizationTest, SingleSlotEqualsAverageLoad) {
  const SliceSet s = BuildOrDie(SampleLog());
  absl::StatusOr<UtilizationReport> u = Utilization(s, 628);
  absl::StatusOr<LoadReport> load = AverageLoad(s);
  ASSERT_TRUE(u.ok());
  ASSERT_EQ(u->slots.size(), 1u);
  EXPECT_FALSE(u->slots[0].partial);
  ASSERT_EQ(u->slots[0].shares.size(), load->rows.size());
  for (std::size_t i = 0; i < load->rows.size(); ++i) {
    EXPECT_EQ(u->slots[0].shares[i].entity, load->rows[i].entity);
    EXPECT_EQ(u->slots[0].shares[i].charged_us, load->rows[i].net_us);
    EXPECT_EQ(u->slots[0].shares[i].fraction, load->rows[i].utilization);
  }
}

TEST(UtilizationTest, TwoSlots) {
  absl::StatusOr<UtilizationReport> u =
      Utilization(BuildOrDie(SampleLog()), 314);
  ASSERT_TRUE(u.ok());
  ASSERT_EQ(u->slots.size(), 2u);
  auto charged = [](const UtilizationSlot& slot) {
    std::map<EntityId, DurationUs> m;
    for (const SlotShare& share : slot.shares) {
      m[share.entity] = share.charged_us;
      EXPECT_DOUBLE_EQ(share.fraction, share.charged_us / 314.0);
    }
    return m;
  };
  EXPECT_EQ(u->slots[0].start, Timestamp(kSampleStart));
  EXPECT_EQ(u->slots[1].start, Timestamp(1290916));
  EXPECT_EQ(charged(u->slots[0]),
            (std::map<EntityId, DurationUs>{{EntityId::Task(1), 86},
                                            {EntityId::Task(3), 76},
                                            {EntityId::Task(4), 129},
                                            {EntityId::Irq(16), 23}}));
  EXPECT_EQ(charged(u->slots[1]),
            (std::map<EntityId, DurationUs>{{EntityId::Task(2), 93},
                                            {EntityId::Task(4), 6},
                                            {EntityId::Task(5), 182},
                                            {EntityId::Irq(23), 33}}));
}

TEST(UtilizationTest, SingleTaskAnyWidth) {
  const SliceSet s = SingleTask(3, 1000);
  for (DurationUs w : {1u, 7u, 100u, 999u, 1000u, 5000u}) {
    absl::StatusOr<UtilizationReport> u = Utilization(s, w);
    ASSERT_TRUE(u.ok());
    EXPECT_EQ(u->slots.size(), (1000 + w - 1) / w);
    for (const UtilizationSlot& slot : u->slots) {
      ASSERT_EQ(slot.shares.size(), 1u);
      EXPECT_EQ(slot.shares[0].fraction, 1.0);
    }
    EXPECT_EQ(u->slots.back().partial, 1000 % w != 0);
  }
}

TEST(UtilizationTest, MatchesPerMicrosecondOracle) {
  RandomScenarioOptions options;
  options.runs = 40;
  options.max_gross_us = 300;
  options.irq_probability = 0.5;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const EventLog log = GeneratedLog(seed, options);
    const SliceSet s = BuildOrDie(log);
    const std::vector<EntityId> owner = ChargePerMicrosecond(log);
    const DurationUs width = 1 + seed * 37 % 500;
    absl::StatusOr<UtilizationReport> u = Utilization(s, width);
    ASSERT_TRUE(u.ok());
    ASSERT_EQ(u->slots.size(), (owner.size() + width - 1) / width);
    for (std::size_t k = 0; k < u->slots.size(); ++k) {
      std::map<EntityId, DurationUs> expected;
      const std::size_t end = std::min(owner.size(), (k + 1) * width);
      for (std::size_t t = k * width; t < end; ++t)
        ++expected[owner[t]];
      std::map<EntityId, DurationUs> got;
      double sum = 0;
      for (const SlotShare& share : u->slots[k].shares) {
        got[share.entity] = share.charged_us;
        sum += share.fraction;
      }
      EXPECT_EQ(got, expected) << "seed " << seed << " slot " << k;
      EXPECT_EQ(u->slots[k].span_us, end - k * width);
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(UtilizationTest, AlignedZoomMatchesFullWindow) {
  const SliceSet s = BuildOrDie(GeneratedLog(77));
  const DurationUs width = 250;
  absl::StatusOr<UtilizationReport> full = Utilization(s, width);
  ASSERT_TRUE(full.ok());
  ASSERT_GT(full->slots.size(), 6u);
  const AnalysisWindow zoom{full->slots[2].start,
                            full->slots[2].start + 3 * width};
  absl::StatusOr<UtilizationReport> zoomed = Utilization(s, width, zoom);
  ASSERT_TRUE(zoomed.ok());
  EXPECT_EQ(zoomed->range, zoom);
  ASSERT_EQ(zoomed->slots.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k)
    EXPECT_EQ(zoomed->slots[k], full->slots[k + 2]);
}

TEST(UtilizationTest, ZoomIsClippedToWindow) {
  const SliceSet s = BuildOrDie(SampleLog());
  absl::StatusOr<UtilizationReport> u = Utilization(
      s, 1000, AnalysisWindow{Timestamp(0), Timestamp(1290764)});
  ASSERT_TRUE(u.ok());
  EXPECT_EQ(u->range, (AnalysisWindow{Timestamp(kSampleStart),
                                      Timestamp(1290764)}));
  EXPECT_EQ(Utilization(s, 1000,
                        AnalysisWindow{Timestamp(1), Timestamp(1000)})
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(Utilization(s, 0).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(TaskStatisticsTest, SampleTrace) {
  absl::StatusOr<StatsReport> r = TaskStatistics(BuildOrDie(SampleLog()));
  ASSERT_TRUE(r.ok());
  std::map<EntityId, EntityStats> by_entity;
  for (const EntityStats& e : r->entities)
    by_entity[e.entity] = e;

  const EntityStats& task4 = by_entity.at(EntityId::Task(4));
  EXPECT_EQ(task4.dispatches, 1u);
  EXPECT_EQ(task4.execution.summary, (SampleSummary{1, 135, 135, 135, 135.0}));
  EXPECT_FALSE(task4.period.has_value());

  const EntityStats& irq23 = by_entity.at(EntityId::Irq(23));
  EXPECT_EQ(irq23.dispatches, 1u);
  EXPECT_EQ(irq23.execution.summary.max_us, 33u);

  const EntityStats& task3 = by_entity.at(EntityId::Task(3));
  ASSERT_TRUE(task3.period.has_value());
  EXPECT_EQ(task3.period->summary, (SampleSummary{1, 628, 628, 628, 628.0}));

  double shares = 0;
  DurationUs total = 0;
  for (const EntityStats& e : r->entities) {
    EXPECT_GE(e.dispatches, 1u);
    shares += e.share;
    total += e.execution.summary.sum_us;
    EXPECT_EQ(e.net_us, e.execution.summary.sum_us);
  }
  EXPECT_NEAR(shares, 1.0, 1e-9);
  EXPECT_EQ(total, 628u);
}

TEST(TaskStatisticsTest, FieldSetOfReportRow) {
  // Utilization, worst case, minimum and average for one task.
  EventLog log;
  log.events = {{Timestamp(0), TaskSchedule{0, 1}},
                {Timestamp(6), TaskSchedule{1, 0}},
                {Timestamp(100), TaskSchedule{0, 1}},
                {Timestamp(626), TaskSchedule{1, 0}},
                {Timestamp(1000), TaskSchedule{0, 1}}};
  absl::StatusOr<StatsReport> r = TaskStatistics(BuildOrDie(log));
  ASSERT_TRUE(r.ok());
  const EntityStats& task1 = r->entities[1];
  ASSERT_EQ(task1.entity, EntityId::Task(1));
  EXPECT_DOUBLE_EQ(task1.share, 0.532);
  EXPECT_EQ(task1.execution.summary.max_us, 526u);
  EXPECT_EQ(task1.execution.summary.min_us, 6u);
  EXPECT_DOUBLE_EQ(task1.execution.summary.mean_us, 266.0);
  ASSERT_TRUE(task1.period.has_value());
  EXPECT_EQ(task1.period->summary.count, 2u);
  EXPECT_EQ(task1.period->summary.min_us, 100u);
  EXPECT_EQ(task1.period->summary.max_us, 900u);
}

TEST(TaskStatisticsTest, SamplesMatchManifest) {
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    absl::StatusOr<GeneratedTrace> g = GenerateTrace(RandomScenario(seed, {}));
    ASSERT_TRUE(g.ok());
    const SliceSet s =
        BuildOrDie(*ParseTrace(g->text, ParseMode::kStrict));
    for (EntitySamples& e : CollectSamples(s)) {
      std::sort(e.execution_us.begin(), e.execution_us.end());
      std::vector<DurationUs> expected = g->manifest.execution_us[e.entity];
      std::sort(expected.begin(), expected.end());
      EXPECT_EQ(e.execution_us, expected);
      if (e.entity.is_task()) {
        std::vector<DurationUs> periods = g->manifest.period_us[e.entity];
        std::sort(periods.begin(), periods.end());
        std::sort(e.period_us.begin(), e.period_us.end());
        EXPECT_EQ(e.period_us, periods);
      }
    }
  }
}

TEST(TaskStatisticsTest, BinsMustBePositive) {
  EXPECT_EQ(TaskStatistics(BuildOrDie(SampleLog()), 0).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(TimelineTest, SampleTrace) {
  absl::StatusOr<TimelineReport> r = Timeline(BuildOrDie(SampleLog()));
  ASSERT_TRUE(r.ok());
  std::map<EntityId, std::vector<TimelineSegment>> by_entity;
  for (const EntityTimeline& e : r->entities)
    by_entity[e.entity] = e.segments;
  using S = EntityState;
  auto seg = [](S state, std::uint64_t a, std::uint64_t b) {
    return TimelineSegment{state, Timestamp(a), Timestamp(b)};
  };
  EXPECT_EQ(by_entity[EntityId::Task(4)],
            (std::vector<TimelineSegment>{
                seg(S::kInactive, 1290602, 1290764),
                seg(S::kRunning, 1290764, 1290838),
                seg(S::kPreemptedByIrq, 1290838, 1290861),
                seg(S::kRunning, 1290861, 1290922),
                seg(S::kInactive, 1290922, 1291230)}));
  EXPECT_EQ(by_entity[EntityId::Irq(16)],
            (std::vector<TimelineSegment>{
                seg(S::kInactive, 1290602, 1290838),
                seg(S::kActive, 1290838, 1290861),
                seg(S::kInactive, 1290861, 1291230)}));
}

TEST(TimelineTest, ZoomKeepsIdleEntities) {
  absl::StatusOr<TimelineReport> r =
      Timeline(BuildOrDie(SampleLog()),
               AnalysisWindow{Timestamp(1290764), Timestamp(1290922)});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->entities.size(), 7u);
  for (const EntityTimeline& e : r->entities) {
    if (e.entity == EntityId::Task(1)) {
      EXPECT_EQ(e.segments,
                (std::vector<TimelineSegment>{{EntityState::kInactive,
                                               Timestamp(1290764),
                                               Timestamp(1290922)}}));
    }
  }
}

TEST(TimelineTest, MatchesPerMicrosecondOracle) {
  RandomScenarioOptions options;
  options.runs = 30;
  options.max_gross_us = 200;
  options.irq_probability = 0.6;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const EventLog log = GeneratedLog(seed, options);
    const SliceSet s = BuildOrDie(log);
    const std::vector<MicroState> states = StatePerMicrosecond(log);
    absl::StatusOr<TimelineReport> r = Timeline(s);
    ASSERT_TRUE(r.ok());
    const std::map<EntityId, DurationUs> net = NetTimes(s);
    DurationUs irq_net = 0;
    for (const auto& [entity, us] : net)
      irq_net += entity.is_irq() ? us : 0;
    DurationUs preempted = 0;
    for (const EntityTimeline& e : r->entities) {
      Timestamp cursor = s.window.start;
      DurationUs running = 0;
      for (std::size_t i = 0; i < e.segments.size(); ++i) {
        const TimelineSegment& seg = e.segments[i];
        EXPECT_EQ(seg.start, cursor);
        EXPECT_LT(seg.start, seg.end);
        if (i > 0)
          EXPECT_NE(seg.state, e.segments[i - 1].state);
        for (Timestamp t = seg.start; t < seg.end; t = t + 1) {
          ASSERT_EQ(seg.state,
                    ExpectedState(states[t - s.window.start], e.entity))
              << "seed " << seed << " " << EntityLabel(e.entity);
        }
        if (seg.state == EntityState::kRunning)
          running += seg.end - seg.start;
        if (seg.state == EntityState::kPreemptedByIrq)
          preempted += seg.end - seg.start;
        cursor = seg.end;
      }
      EXPECT_EQ(cursor, s.window.end);
      if (e.entity.is_task())
        EXPECT_EQ(running, net.count(e.entity) ? net.at(e.entity) : 0);
    }
    // Generated scenarios put every IRQ inside a scheduled run.
    EXPECT_EQ(preempted, irq_net);
  }
}

}  // namespace
}  // namespace schedtrace
