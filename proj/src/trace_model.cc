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

#include "schedtrace/trace_model.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace schedtrace {

absl::StatusOr<Timestamp> TimestampFromFields(const TimestampFields& f) {
  if (f.minutes >= 60 || f.seconds >= 60 || f.millis >= 1000 ||
      f.micros >= 1000) {
    return absl::OutOfRangeError(
        absl::StrFormat("timestamp field out of range: %dm %ds %d %d",
                        f.minutes, f.seconds, f.millis, f.micros));
  }
  if (f.hours > kMaxTimestampHours) {
    return absl::OutOfRangeError(
        absl::StrCat("timestamp hours exceed 9999: ", f.hours));
  }
  const std::uint64_t micros =
      ((f.hours * 60 + f.minutes) * 60 + f.seconds) * 1000000 +
      f.millis * 1000 + f.micros;
  return Timestamp(micros);
}

TimestampFields FieldsFromTimestamp(Timestamp t) {
  std::uint64_t v = t.micros();
  TimestampFields f;
  f.micros = v % 1000;
  v /= 1000;
  f.millis = v % 1000;
  v /= 1000;
  f.seconds = v % 60;
  v /= 60;
  f.minutes = v % 60;
  f.hours = v / 60;
  return f;
}

absl::StatusOr<std::string> FormatTimestamp(Timestamp t) {
  if (t.micros() > kMaxTimestampMicros) {
    return absl::OutOfRangeError(
        absl::StrCat("timestamp beyond 9999h: ", t.micros(), " us"));
  }
  const TimestampFields f = FieldsFromTimestamp(t);
  return absl::StrFormat("%04dh %02dm %02ds %03d %03d", f.hours, f.minutes,
                         f.seconds, f.millis, f.micros);
}

const char* KindName(EntityKind kind) {
  return kind == EntityKind::kTask ? "task" : "irq";
}

std::string EntityLabel(EntityId entity) {
  if (entity.is_idle())
    return "idle";
  return absl::StrCat(KindName(entity.kind), " ", entity.id);
}

const char* ParseDiagnosticKindName(ParseDiagnosticKind kind) {
  switch (kind) {
    case ParseDiagnosticKind::kMalformedTimestamp:
      return "malformed timestamp";
    case ParseDiagnosticKind::kUnknownEvent:
      return "unknown event";
    case ParseDiagnosticKind::kMalformedPayload:
      return "malformed payload";
    case ParseDiagnosticKind::kNonMonotonicTimestamp:
      return "non-monotonic timestamp";
  }
  return "?";
}

std::map<EntityId, DurationUs> NetTimes(const SliceSet& slices) {
  std::map<EntityId, DurationUs> net;
  for (const ExecutionSlice& slice : slices.slices)
    net[slice.entity] += slice.duration();
  return net;
}

}  // namespace schedtrace
