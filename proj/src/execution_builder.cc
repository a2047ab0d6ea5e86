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

#include "schedtrace/execution_builder.h"

#include <cstdint>
#include <optional>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace schedtrace {
namespace {

struct IrqFrame {
  std::uint32_t irq = 0;
  Timestamp begin;
  DurationUs net_us = 0;
  std::size_t begin_index = 0;
};

struct OpenDispatch {
  std::uint32_t task = 0;
  Timestamp start;
  DurationUs net_us = 0;
};

std::uint32_t InitialTask(const EventLog& log) {
  for (const TraceEvent& event : log.events) {
    if (const auto* s = std::get_if<TaskSchedule>(&event.payload))
      return s->old_task;
  }
  return 0;
}

class Replayer {
 public:
  // `out` may be null when only violations are wanted.
  Replayer(const EventLog& log,
           ReplayMode mode,
           SliceSet* out,
           std::vector<ConsistencyViolation>* violations)
      : log_(log), mode_(mode), out_(out), violations_(violations) {}

  absl::Status Run() {
    const AnalysisWindow window = log_.window();
    if (out_) {
      out_->window = window;
      out_->slices.reserve(log_.events.size());
      out_->dispatches.reserve(log_.events.size());
    }
    cursor_ = window.start;
    run_ = OpenDispatch{InitialTask(log_), window.start, 0};

    for (std::size_t i = 0; i < log_.events.size(); ++i) {
      const TraceEvent& event = log_.events[i];
      Charge(event.at);
      absl::Status status = std::visit(
          [&](const auto& payload) { return Apply(i, event.at, payload); },
          event.payload);
      if (!status.ok())
        return status;
    }

    while (!irqs_.empty()) {
      const IrqFrame& top = irqs_.back();
      absl::Status status = Report(
          window.end, ViolationKind::kIrqOpenAtTraceEnd, top.begin_index,
          absl::StrCat("IRQ ", top.irq, " still open at end of trace"));
      if (!status.ok())
        return status;
      CloseIrq(window.end);
    }
    CloseTask(window.end);
    return absl::OkStatus();
  }

 private:
  void Charge(Timestamp until) {
    if (until <= cursor_)
      return;
    const DurationUs elapsed = until - cursor_;
    EntityId who;
    if (!irqs_.empty()) {
      irqs_.back().net_us += elapsed;
      who = EntityId::Irq(irqs_.back().irq);
    } else {
      run_.net_us += elapsed;
      who = EntityId::Task(run_.task);
    }
    if (out_) {
      auto& slices = out_->slices;
      if (!slices.empty() && slices.back().entity == who &&
          slices.back().end == cursor_) {
        slices.back().end = until;
      } else {
        slices.push_back(ExecutionSlice{who, cursor_, until});
      }
    }
    cursor_ = until;
  }

  absl::Status Apply(std::size_t index, Timestamp at, const TaskSchedule& s) {
    if (s.old_task != run_.task) {
      absl::Status status =
          Report(at, ViolationKind::kOldTaskMismatch, index,
                 absl::StrCat("schedule reports old task ", s.old_task,
                              " but task ", run_.task, " is running"));
      if (!status.ok())
        return status;
    }
    CloseTask(at);
    run_ = OpenDispatch{s.new_task, at, 0};
    if (out_)
      out_->schedule_ins.push_back(ScheduleIn{s.new_task, at});
    return absl::OkStatus();
  }

  absl::Status Apply(std::size_t index, Timestamp at, const IrqBegin& b) {
    irqs_.push_back(IrqFrame{b.irq, at, 0, index});
    return absl::OkStatus();
  }

  absl::Status Apply(std::size_t index, Timestamp at, const IrqEnd& e) {
    if (irqs_.empty()) {
      return Report(at, ViolationKind::kIrqEndWithoutBegin, index,
                    absl::StrCat("IRQ end ", e.irq, " without matching begin"));
    }
    if (irqs_.back().irq != e.irq) {
      return Report(at, ViolationKind::kIrqEndIdMismatch, index,
                    absl::StrCat("IRQ end ", e.irq, " while IRQ ",
                                 irqs_.back().irq, " is innermost"));
    }
    CloseIrq(at);
    return absl::OkStatus();
  }

  void CloseTask(Timestamp at) {
    if (out_ && at > run_.start) {
      out_->dispatches.push_back(
          Dispatch{EntityId::Task(run_.task), run_.start, at, run_.net_us});
    }
  }

  void CloseIrq(Timestamp at) {
    const IrqFrame frame = irqs_.back();
    irqs_.pop_back();
    if (out_ && at > frame.begin) {
      out_->dispatches.push_back(
          Dispatch{EntityId::Irq(frame.irq), frame.begin, at, frame.net_us});
    }
  }

  // Records the violation. Returns an error only in strict mode; in lenient
  // mode the caller proceeds with the repair.
  absl::Status Report(Timestamp at,
                      ViolationKind kind,
                      std::size_t index,
                      std::string detail) {
    std::string message =
        absl::StrCat(ViolationKindName(kind), " at ", at.micros(), " us: ",
                     detail);
    if (violations_) {
      violations_->push_back(
          ConsistencyViolation{at, kind, std::move(detail), index});
    }
    if (mode_ == ReplayMode::kStrict)
      return absl::InvalidArgumentError(std::move(message));
    return absl::OkStatus();
  }

  const EventLog& log_;
  const ReplayMode mode_;
  SliceSet* const out_;
  std::vector<ConsistencyViolation>* const violations_;

  Timestamp cursor_;
  OpenDispatch run_;
  std::vector<IrqFrame> irqs_;
};

absl::Status CheckSorted(const EventLog& log) {
  if (log.events.empty())
    return absl::FailedPreconditionError("empty trace: no events to replay");
  for (std::size_t i = 1; i < log.events.size(); ++i) {
    if (log.events[i].at < log.events[i - 1].at) {
      return absl::InvalidArgumentError(
          absl::StrCat("event ", i, " is out of timestamp order"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

const char* ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kOldTaskMismatch:
      return "old task mismatch";
    case ViolationKind::kIrqEndWithoutBegin:
      return "IRQ end without begin";
    case ViolationKind::kIrqEndIdMismatch:
      return "IRQ end id mismatch";
    case ViolationKind::kIrqOpenAtTraceEnd:
      return "IRQ open at trace end";
  }
  return "?";
}

absl::StatusOr<SliceSet> BuildSlices(
    const EventLog& log,
    ReplayMode mode,
    std::vector<ConsistencyViolation>* violations) {
  if (absl::Status status = CheckSorted(log); !status.ok())
    return status;
  SliceSet out;
  Replayer replayer(log, mode, &out, violations);
  if (absl::Status status = replayer.Run(); !status.ok())
    return status;
  return out;
}

std::vector<ConsistencyViolation> ValidateConsistency(const EventLog& log) {
  std::vector<ConsistencyViolation> violations;
  if (log.events.empty())
    return violations;
  Replayer replayer(log, ReplayMode::kLenient, nullptr, &violations);
  replayer.Run().IgnoreError();
  return violations;
}

}  // namespace schedtrace
