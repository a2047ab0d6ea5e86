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

#ifndef SCHEDTRACE_EXECUTION_BUILDER_H_
#define SCHEDTRACE_EXECUTION_BUILDER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "schedtrace/trace_model.h"

namespace schedtrace {

// Replays an event log into a SliceSet. Each instant of the window is charged
// to the innermost open IRQ if any, otherwise to the scheduled task, so IRQ
// time is subtracted from whatever it interrupted.
//
// The window is [first event, last event]. The task running when the window
// opens is the `old` task of the first schedule event (idle if the log has
// none). A schedule event received while IRQs are open changes the task
// underneath the IRQ stack; the IRQs stay charged until they end.

enum class ReplayMode {
  // Any consistency violation aborts the build.
  kStrict,
  // Violations are repaired and recorded:
  //  - a schedule whose `old` differs from the running task resyncs to `new`;
  //  - an IRQ end that does not match the top of the stack is dropped;
  //  - IRQs still open at the last event are closed at window end.
  kLenient,
};

enum class ViolationKind {
  kOldTaskMismatch,
  kIrqEndWithoutBegin,
  kIrqEndIdMismatch,
  kIrqOpenAtTraceEnd,
};

const char* ViolationKindName(ViolationKind kind);

struct ConsistencyViolation {
  Timestamp at;
  ViolationKind kind = ViolationKind::kOldTaskMismatch;
  std::string detail;
  // Index into EventLog::events of the offending event. For
  // kIrqOpenAtTraceEnd, the index of the unmatched IrqBegin.
  std::size_t event_index = 0;
};

// Fails with FailedPrecondition on an empty log, InvalidArgument on an
// unsorted log or, in strict mode, on the first violation. When `violations`
// is non-null it receives every violation encountered (at most one in strict
// mode).
absl::StatusOr<SliceSet> BuildSlices(
    const EventLog& log,
    ReplayMode mode,
    std::vector<ConsistencyViolation>* violations = nullptr);

// Every violation along the event stream, each repaired as in lenient mode
// before replay continues. Empty iff a strict build succeeds.
std::vector<ConsistencyViolation> ValidateConsistency(const EventLog& log);

}  // namespace schedtrace

#endif  // SCHEDTRACE_EXECUTION_BUILDER_H_
