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

#include "schedtrace/trace_parser.h"

#include <cstdint>
#include <iterator>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace schedtrace {
namespace {

bool IsBlank(char c) {
  return c == ' ' || c == '\t';
}

bool IsDigit(char c) {
  return c >= '0' && c <= '9';
}

class LineCursor {
 public:
  explicit LineCursor(absl::string_view text) : rest_(text) {}

  bool at_end() const { return rest_.empty(); }
  char peek() const { return rest_.empty() ? '\0' : rest_.front(); }

  // True if at least one blank was consumed.
  bool SkipBlanks() {
    std::size_t n = 0;
    while (n < rest_.size() && IsBlank(rest_[n]))
      ++n;
    rest_.remove_prefix(n);
    return n > 0;
  }

  bool Consume(absl::string_view literal) {
    if (rest_.substr(0, literal.size()) != literal)
      return false;
    rest_.remove_prefix(literal.size());
    return true;
  }

  // One or more decimal digits whose value does not exceed `max`.
  bool ConsumeNumber(std::uint64_t max, std::uint64_t* out) {
    std::size_t n = 0;
    std::uint64_t value = 0;
    while (n < rest_.size() && IsDigit(rest_[n])) {
      const std::uint64_t digit = static_cast<std::uint64_t>(rest_[n] - '0');
      if (value > (max - digit) / 10)
        return false;
      value = value * 10 + digit;
      ++n;
    }
    if (n == 0)
      return false;
    rest_.remove_prefix(n);
    *out = value;
    return true;
  }

 private:
  absl::string_view rest_;
};

absl::string_view Trim(absl::string_view s) {
  while (!s.empty() && (IsBlank(s.front()) || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (IsBlank(s.back()) || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

ParseDiagnostic Diag(std::size_t line,
                     ParseDiagnosticKind kind,
                     std::string message) {
  return ParseDiagnostic{line, kind, std::move(message)};
}

constexpr std::uint64_t kMaxField = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kMaxId = std::numeric_limits<std::uint32_t>::max();

// Parses "<H h M m S s MS US>" up to and including '>'.
bool ParseTimestampToken(LineCursor* c, TimestampFields* f) {
  if (!c->Consume("<"))
    return false;
  if (!c->ConsumeNumber(kMaxField, &f->hours) || !c->Consume("h") ||
      !c->SkipBlanks())
    return false;
  if (!c->ConsumeNumber(kMaxField, &f->minutes) || !c->Consume("m") ||
      !c->SkipBlanks())
    return false;
  if (!c->ConsumeNumber(kMaxField, &f->seconds) || !c->Consume("s") ||
      !c->SkipBlanks())
    return false;
  if (!c->ConsumeNumber(kMaxField, &f->millis) || !c->SkipBlanks())
    return false;
  if (!c->ConsumeNumber(kMaxField, &f->micros))
    return false;
  return c->Consume(">");
}

// Matches a keyword phrase such as "IRQ begin:" allowing any run of blanks
// between its words.
bool ConsumePhrase(LineCursor* c, std::initializer_list<absl::string_view> words) {
  bool first = true;
  for (absl::string_view word : words) {
    if (!first && !c->SkipBlanks())
      return false;
    if (!c->Consume(word))
      return false;
    first = false;
  }
  return true;
}

bool ConsumeId(LineCursor* c, std::uint32_t* id) {
  std::uint64_t value = 0;
  if (!c->SkipBlanks() || !c->ConsumeNumber(kMaxId, &value))
    return false;
  *id = static_cast<std::uint32_t>(value);
  return true;
}

}  // namespace

LineParseResult ParseLine(absl::string_view line, std::size_t line_number) {
  line = Trim(line);
  LineCursor c(line);
  if (c.peek() != '<') {
    return Diag(line_number, ParseDiagnosticKind::kUnknownEvent,
                absl::StrCat("not a trace event: '", line, "'"));
  }
  TimestampFields fields;
  if (!ParseTimestampToken(&c, &fields)) {
    return Diag(line_number, ParseDiagnosticKind::kMalformedTimestamp,
                absl::StrCat("malformed timestamp in '", line, "'"));
  }
  absl::StatusOr<Timestamp> at = TimestampFromFields(fields);
  if (!at.ok()) {
    return Diag(line_number, ParseDiagnosticKind::kMalformedTimestamp,
                std::string(at.status().message()));
  }
  if (!c.SkipBlanks()) {
    return Diag(line_number, ParseDiagnosticKind::kUnknownEvent,
                absl::StrCat("missing event after timestamp in '", line, "'"));
  }

  auto malformed = [&] {
    return Diag(line_number, ParseDiagnosticKind::kMalformedPayload,
                absl::StrCat("malformed event data in '", line, "'"));
  };

  TraceEvent event{*at, {}};
  LineCursor task = c;
  if (ConsumePhrase(&task, {"Task", "schedule:"})) {
    TaskSchedule s;
    if (!task.SkipBlanks() || !task.Consume("old") ||
        !ConsumeId(&task, &s.old_task) || !task.SkipBlanks() ||
        !task.Consume("new") || !ConsumeId(&task, &s.new_task) ||
        !task.at_end())
      return malformed();
    event.payload = s;
    return event;
  }
  LineCursor irq = c;
  if (ConsumePhrase(&irq, {"IRQ", "begin:"})) {
    IrqBegin b;
    if (!ConsumeId(&irq, &b.irq) || !irq.at_end())
      return malformed();
    event.payload = b;
    return event;
  }
  irq = c;
  if (ConsumePhrase(&irq, {"IRQ", "end:"})) {
    IrqEnd e;
    if (!ConsumeId(&irq, &e.irq) || !irq.at_end())
      return malformed();
    event.payload = e;
    return event;
  }
  return Diag(line_number, ParseDiagnosticKind::kUnknownEvent,
              absl::StrCat("unknown event type in '", line, "'"));
}

absl::StatusOr<EventLog> ParseTrace(absl::string_view text, ParseMode mode) {
  EventLog log;
  std::size_t line_number = 0;
  while (!text.empty()) {
    ++line_number;
    const std::size_t eol = text.find('\n');
    absl::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == absl::string_view::npos ? text.size() : eol + 1);
    if (Trim(line).empty())
      continue;

    LineParseResult parsed = ParseLine(line, line_number);
    ParseDiagnostic* diag = std::get_if<ParseDiagnostic>(&parsed);
    TraceEvent* event = std::get_if<TraceEvent>(&parsed);
    ParseDiagnostic order_diag;
    if (event && !log.events.empty() && event->at < log.events.back().at) {
      order_diag = Diag(
          line_number, ParseDiagnosticKind::kNonMonotonicTimestamp,
          absl::StrCat("timestamp ", event->at.micros(),
                       " us precedes previous event at ",
                       log.events.back().at.micros(), " us"));
      diag = &order_diag;
    }
    if (diag) {
      if (mode == ParseMode::kStrict) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", diag->line, ": ",
                         ParseDiagnosticKindName(diag->kind), ": ",
                         diag->message));
      }
      log.diagnostics.push_back(std::move(*diag));
      continue;
    }
    log.events.push_back(std::move(*event));
  }
  if (log.events.empty())
    return absl::FailedPreconditionError("empty trace: no events found");
  return log;
}

absl::StatusOr<EventLog> ParseTrace(std::istream& input, ParseMode mode) {
  std::string text(std::istreambuf_iterator<char>(input), {});
  if (input.bad())
    return absl::DataLossError("failed to read trace input");
  return ParseTrace(absl::string_view(text), mode);
}

absl::StatusOr<std::string> RenderEvent(const TraceEvent& event) {
  absl::StatusOr<std::string> ts = FormatTimestamp(event.at);
  if (!ts.ok())
    return ts.status();
  std::string out = absl::StrCat("<", *ts, "> ");
  if (const auto* s = std::get_if<TaskSchedule>(&event.payload)) {
    absl::StrAppend(&out, "Task schedule: old ", s->old_task, " new ",
                    s->new_task);
  } else if (const auto* b = std::get_if<IrqBegin>(&event.payload)) {
    absl::StrAppend(&out, "IRQ begin: ", b->irq);
  } else {
    absl::StrAppend(&out, "IRQ end: ", std::get<IrqEnd>(event.payload).irq);
  }
  return out;
}

absl::StatusOr<std::string> RenderTrace(const EventLog& log) {
  std::string out;
  out.reserve(log.events.size() * 48);
  for (const TraceEvent& event : log.events) {
    absl::StatusOr<std::string> line = RenderEvent(event);
    if (!line.ok())
      return line.status();
    absl::StrAppend(&out, *line, "\n");
  }
  return out;
}

}  // namespace schedtrace
