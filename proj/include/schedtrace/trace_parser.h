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

#ifndef SCHEDTRACE_TRACE_PARSER_H_
#define SCHEDTRACE_TRACE_PARSER_H_

#include <cstddef>
#include <istream>
#include <string>
#include <variant>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "schedtrace/trace_model.h"

namespace schedtrace {

// Reader and writer for text traces of the form
//
//   <0000h 00m 01s 290 602> Task schedule: old 5 new 3
//   <0000h 00m 01s 290 838> IRQ begin: 16
//   <0000h 00m 01s 290 861> IRQ end: 16
//
// On input, timestamp fields take any number of digits and tokens may be
// separated by runs of spaces or tabs. Output is always the canonical
// zero-padded, single-space layout with LF line endings.

enum class ParseMode {
  // The first diagnostic fails the parse.
  kStrict,
  // Bad lines and out-of-order events are dropped and recorded in
  // EventLog::diagnostics.
  kLenient,
};

using LineParseResult = std::variant<TraceEvent, ParseDiagnostic>;

// `line` must not contain the line terminator. A trailing '\r' is tolerated.
// `line_number` is only used to label the diagnostic.
LineParseResult ParseLine(absl::string_view line, std::size_t line_number = 1);

// Blank lines are skipped. Fails with InvalidArgument ("line N: ...") on a
// strict-mode diagnostic and with FailedPrecondition when no event remains.
absl::StatusOr<EventLog> ParseTrace(absl::string_view text, ParseMode mode);
absl::StatusOr<EventLog> ParseTrace(std::istream& input, ParseMode mode);

// Single line, no terminator. Fails with OutOfRange past 9999h.
absl::StatusOr<std::string> RenderEvent(const TraceEvent& event);

// One rendered line per event, each terminated by '\n'.
absl::StatusOr<std::string> RenderTrace(const EventLog& log);

}  // namespace schedtrace

#endif  // SCHEDTRACE_TRACE_PARSER_H_
