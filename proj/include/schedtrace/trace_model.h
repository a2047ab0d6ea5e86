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

#ifndef SCHEDTRACE_TRACE_MODEL_H_
#define SCHEDTRACE_TRACE_MODEL_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"

namespace schedtrace {

// Durations are plain integer microseconds. Only points in time get a
// dedicated type.
using DurationUs = std::uint64_t;

// Largest timestamp the trace format can express: 9999h 59m 59s 999 999.
inline constexpr std::uint64_t kMaxTimestampMicros =
    10000ull * 3600ull * 1000000ull - 1;
inline constexpr std::uint64_t kMaxTimestampHours = 9999;

// Microseconds since the trace clock origin (`0000h 00m 00s 000 000`).
class Timestamp {
 public:
  constexpr Timestamp() = default;
  constexpr explicit Timestamp(std::uint64_t micros) : micros_(micros) {}

  constexpr std::uint64_t micros() const { return micros_; }

  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;

  friend constexpr Timestamp operator+(Timestamp t, DurationUs d) {
    return Timestamp(t.micros_ + d);
  }
  // Caller guarantees a >= b.
  friend constexpr DurationUs operator-(Timestamp a, Timestamp b) {
    return a.micros_ - b.micros_;
  }

 private:
  std::uint64_t micros_ = 0;
};

struct TimestampFields {
  std::uint64_t hours = 0;
  std::uint64_t minutes = 0;
  std::uint64_t seconds = 0;
  std::uint64_t millis = 0;
  std::uint64_t micros = 0;
};

// Fails with OutOfRange when a sub-field exceeds its radix or the hour field
// does not fit the four-digit format.
absl::StatusOr<Timestamp> TimestampFromFields(const TimestampFields& fields);
TimestampFields FieldsFromTimestamp(Timestamp t);

// "0000h 00m 01s 290 602". Fails with OutOfRange beyond 9999h.
absl::StatusOr<std::string> FormatTimestamp(Timestamp t);

enum class EntityKind : std::uint8_t { kTask = 0, kIrq = 1 };

// Tasks and IRQ handlers live in disjoint id namespaces. Task 0 is the idle
// task. Ordering is all tasks (ascending id) before all IRQs.
struct EntityId {
  EntityKind kind = EntityKind::kTask;
  std::uint32_t id = 0;

  static constexpr EntityId Task(std::uint32_t id) {
    return {EntityKind::kTask, id};
  }
  static constexpr EntityId Irq(std::uint32_t id) {
    return {EntityKind::kIrq, id};
  }
  constexpr bool is_task() const { return kind == EntityKind::kTask; }
  constexpr bool is_irq() const { return kind == EntityKind::kIrq; }
  constexpr bool is_idle() const { return is_task() && id == 0; }

  friend constexpr auto operator<=>(const EntityId&,
                                    const EntityId&) = default;
};

// "task" / "irq".
const char* KindName(EntityKind kind);
// "idle", "task 4", "irq 16".
std::string EntityLabel(EntityId entity);

struct TaskSchedule {
  std::uint32_t old_task = 0;
  std::uint32_t new_task = 0;
  friend bool operator==(const TaskSchedule&, const TaskSchedule&) = default;
};

struct IrqBegin {
  std::uint32_t irq = 0;
  friend bool operator==(const IrqBegin&, const IrqBegin&) = default;
};

struct IrqEnd {
  std::uint32_t irq = 0;
  friend bool operator==(const IrqEnd&, const IrqEnd&) = default;
};

using EventPayload = std::variant<TaskSchedule, IrqBegin, IrqEnd>;

struct TraceEvent {
  Timestamp at;
  EventPayload payload;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

enum class ParseDiagnosticKind {
  kMalformedTimestamp,
  kUnknownEvent,
  kMalformedPayload,
  kNonMonotonicTimestamp,
};

const char* ParseDiagnosticKindName(ParseDiagnosticKind kind);

struct ParseDiagnostic {
  std::size_t line = 1;  // 1-based
  ParseDiagnosticKind kind = ParseDiagnosticKind::kUnknownEvent;
  std::string message;
  friend bool operator==(const ParseDiagnostic&,
                         const ParseDiagnostic&) = default;
};

// [start, end] of the recorded events. All accounting is truncated to it.
struct AnalysisWindow {
  Timestamp start;
  Timestamp end;

  constexpr DurationUs duration() const { return end - start; }
  constexpr bool empty() const { return start == end; }
  friend bool operator==(const AnalysisWindow&,
                         const AnalysisWindow&) = default;
};

struct EventLog {
  // Sorted by `at`, ties in file order.
  std::vector<TraceEvent> events;
  std::vector<ParseDiagnostic> diagnostics;

  // Requires a non-empty log.
  AnalysisWindow window() const {
    return {events.front().at, events.back().at};
  }
};

// A maximal interval during which the processor is charged to one entity.
struct ExecutionSlice {
  EntityId entity;
  Timestamp start;
  Timestamp end;

  DurationUs duration() const { return end - start; }
  friend bool operator==(const ExecutionSlice&,
                         const ExecutionSlice&) = default;
};

// One contiguous scheduled run of a task, or one begin/end invocation of an
// IRQ handler, clipped to the analysis window. `net_us` excludes time spent
// in IRQs nested inside it.
struct Dispatch {
  EntityId entity;
  Timestamp start;
  Timestamp end;
  DurationUs net_us = 0;

  DurationUs gross_us() const { return end - start; }
  friend bool operator==(const Dispatch&, const Dispatch&) = default;
};

struct ScheduleIn {
  std::uint32_t task = 0;
  Timestamp at;
  friend bool operator==(const ScheduleIn&, const ScheduleIn&) = default;
};

// Result of replaying an event log. `slices` tile `window` exactly.
struct SliceSet {
  AnalysisWindow window;
  std::vector<ExecutionSlice> slices;
  // Positive-length task dispatches and IRQ invocations, in the order they
  // closed.
  std::vector<Dispatch> dispatches;
  // Every schedule-in event observed, including one at window end.
  std::vector<ScheduleIn> schedule_ins;

  friend bool operator==(const SliceSet&, const SliceSet&) = default;
};

// Net charged time per entity. Entities never charged are absent.
std::map<EntityId, DurationUs> NetTimes(const SliceSet& slices);

}  // namespace schedtrace

#endif  // SCHEDTRACE_TRACE_MODEL_H_
