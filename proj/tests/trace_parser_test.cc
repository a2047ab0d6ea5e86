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

#include <random>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "test_oracles.h"

namespace schedtrace {
namespace {

using ::schedtrace::testing::ReadTestData;

TraceEvent EventOf(const LineParseResult& r) {
  EXPECT_TRUE(std::holds_alternative<TraceEvent>(r))
      << std::get<ParseDiagnostic>(r).message;
  return std::get<TraceEvent>(r);
}

ParseDiagnosticKind KindOf(const LineParseResult& r) {
  EXPECT_TRUE(std::holds_alternative<ParseDiagnostic>(r));
  return std::get<ParseDiagnostic>(r).kind;
}

TEST(ParseLineTest, SampleLines) {
  EXPECT_EQ(EventOf(ParseLine(
                "<0000h 00m 01s 290 602> Task schedule: old 5 new 3")),
            (TraceEvent{Timestamp(1290602), TaskSchedule{5, 3}}));
  EXPECT_EQ(EventOf(ParseLine("<0000h 00m 01s 290 838> IRQ begin: 16")),
            (TraceEvent{Timestamp(1290838), IrqBegin{16}}));
  EXPECT_EQ(EventOf(ParseLine("<0000h 00m 01s 290 861> IRQ end: 16")),
            (TraceEvent{Timestamp(1290861), IrqEnd{16}}));
}

TEST(ParseLineTest, AcceptsLooseWhitespaceAndDigitCounts) {
  EXPECT_EQ(EventOf(ParseLine(
                "<0h 0m 1s 290 602>\tTask   schedule:  old 5\t new 3\r")),
            (TraceEvent{Timestamp(1290602), TaskSchedule{5, 3}}));
  EXPECT_EQ(EventOf(ParseLine("  <00001h 002m 03s 4 5>  IRQ  end:   023  ")),
            (TraceEvent{Timestamp(3723004005), IrqEnd{23}}));
}

TEST(ParseLineTest, Diagnostics) {
  EXPECT_EQ(KindOf(ParseLine("hello world")),
            ParseDiagnosticKind::kUnknownEvent);
  EXPECT_EQ(KindOf(ParseLine("<0000h 00m 01s 290 602> Memory alloc: 4")),
            ParseDiagnosticKind::kUnknownEvent);
  EXPECT_EQ(KindOf(ParseLine("<0000h 00m 01s 290 602>")),
            ParseDiagnosticKind::kUnknownEvent);
  EXPECT_EQ(KindOf(ParseLine("<0000h 00m 61s 290 602> IRQ end: 1")),
            ParseDiagnosticKind::kMalformedTimestamp);
  EXPECT_EQ(KindOf(ParseLine("<0000h 00m 01s 290> IRQ end: 1")),
            ParseDiagnosticKind::kMalformedTimestamp);
  EXPECT_EQ(KindOf(ParseLine("<10000h 00m 01s 290 602> IRQ end: 1")),
            ParseDiagnosticKind::kMalformedTimestamp);
  EXPECT_EQ(KindOf(ParseLine("<0000h 00m 01s 290 602> IRQ begin: x")),
            ParseDiagnosticKind::kMalformedPayload);
  EXPECT_EQ(KindOf(ParseLine("<0000h 00m 01s 290 602> IRQ begin: 1 2")),
            ParseDiagnosticKind::kMalformedPayload);
  EXPECT_EQ(KindOf(ParseLine(
                "<0000h 00m 01s 290 602> Task schedule: old 5 new")),
            ParseDiagnosticKind::kMalformedPayload);
  EXPECT_EQ(KindOf(ParseLine(
                "<0000h 00m 01s 290 602> Task schedule: old 5 new 4294967296")),
            ParseDiagnosticKind::kMalformedPayload);
  EXPECT_EQ(KindOf(ParseLine("<0000h 00m 01s 290 602> IRQ end: -1")),
            ParseDiagnosticKind::kMalformedPayload);
}

TEST(ParseLineTest, DiagnosticCarriesLineNumber) {
  const LineParseResult r = ParseLine("bogus", 42);
  EXPECT_EQ(std::get<ParseDiagnostic>(r).line, 42u);
}

TEST(ParseTraceTest, SampleTrace) {
  absl::StatusOr<EventLog> log =
      ParseTrace(ReadTestData("sample.trace"), ParseMode::kStrict);
  ASSERT_TRUE(log.ok()) << log.status();
  EXPECT_EQ(log->events.size(), 10u);
  EXPECT_TRUE(log->diagnostics.empty());
  EXPECT_EQ(log->window(),
            (AnalysisWindow{Timestamp(1290602), Timestamp(1291230)}));
}

TEST(ParseTraceTest, EmptyInputIsAnError) {
  EXPECT_EQ(ParseTrace("", ParseMode::kStrict).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(ParseTrace("\n  \n\t\r\n", ParseMode::kLenient).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(ParseTrace("junk\n", ParseMode::kLenient).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(ParseTraceTest, CorruptLineLenientVersusStrict) {
  const std::string text = ReadTestData("sample.trace");
  std::vector<std::string> lines = absl::StrSplit(text, '\n');
  std::vector<std::string> corrupted = lines;
  corrupted[3] = "<0000h 00m 01s 290 838> IRQ bgein: 16";
  std::vector<std::string> removed = lines;
  removed.erase(removed.begin() + 3);

  absl::StatusOr<EventLog> strict =
      ParseTrace(absl::StrJoin(corrupted, "\n"), ParseMode::kStrict);
  EXPECT_EQ(strict.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(strict.status().message().find("line 4"), absl::string_view::npos);

  absl::StatusOr<EventLog> lenient =
      ParseTrace(absl::StrJoin(corrupted, "\n"), ParseMode::kLenient);
  ASSERT_TRUE(lenient.ok());
  EXPECT_EQ(lenient->events.size(), 9u);
  ASSERT_EQ(lenient->diagnostics.size(), 1u);
  EXPECT_EQ(lenient->diagnostics[0].line, 4u);
  EXPECT_EQ(lenient->diagnostics[0].kind, ParseDiagnosticKind::kUnknownEvent);

  // Oracle: the strict parse of the file with the line removed.
  absl::StatusOr<EventLog> oracle =
      ParseTrace(absl::StrJoin(removed, "\n"), ParseMode::kStrict);
  ASSERT_TRUE(oracle.ok());
  EXPECT_EQ(lenient->events, oracle->events);
}

TEST(ParseTraceTest, NonMonotonicTimestamps) {
  const std::string text =
      "<0000h 00m 00s 000 010> Task schedule: old 0 new 1\n"
      "<0000h 00m 00s 000 005> IRQ begin: 3\n"
      "<0000h 00m 00s 000 020> Task schedule: old 1 new 0\n";
  absl::StatusOr<EventLog> strict = ParseTrace(text, ParseMode::kStrict);
  EXPECT_EQ(strict.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_NE(strict.status().message().find("line 2"), absl::string_view::npos);

  absl::StatusOr<EventLog> lenient = ParseTrace(text, ParseMode::kLenient);
  ASSERT_TRUE(lenient.ok());
  EXPECT_EQ(lenient->events.size(), 2u);
  ASSERT_EQ(lenient->diagnostics.size(), 1u);
  EXPECT_EQ(lenient->diagnostics[0].kind,
            ParseDiagnosticKind::kNonMonotonicTimestamp);
}

TEST(ParseTraceTest, TiesKeepFileOrderAndCrlfIsAccepted) {
  const std::string text =
      "<0000h 00m 00s 000 010> Task schedule: old 0 new 1\r\n"
      "<0000h 00m 00s 000 010> IRQ begin: 3\r\n"
      "\r\n"
      "<0000h 00m 00s 000 010> IRQ end: 3\r\n";
  absl::StatusOr<EventLog> log = ParseTrace(text, ParseMode::kStrict);
  ASSERT_TRUE(log.ok()) << log.status();
  ASSERT_EQ(log->events.size(), 3u);
  EXPECT_TRUE(std::holds_alternative<TaskSchedule>(log->events[0].payload));
  EXPECT_TRUE(std::holds_alternative<IrqBegin>(log->events[1].payload));
  EXPECT_TRUE(std::holds_alternative<IrqEnd>(log->events[2].payload));
}

TEST(ParseTraceTest, ReadsFromStream) {
  std::istringstream in(ReadTestData("sample.trace"));
  absl::StatusOr<EventLog> log = ParseTrace(in, ParseMode::kStrict);
  ASSERT_TRUE(log.ok());
  EXPECT_EQ(log->events.size(), 10u);
}

TEST(RenderEventTest, CanonicalLayout) {
  EXPECT_EQ(*RenderEvent({Timestamp(1290602), TaskSchedule{5, 3}}),
            "<0000h 00m 01s 290 602> Task schedule: old 5 new 3");
  EXPECT_EQ(*RenderEvent({Timestamp(1291124), IrqEnd{23}}),
            "<0000h 00m 01s 291 124> IRQ end: 23");
  EXPECT_EQ(RenderEvent({Timestamp(kMaxTimestampMicros + 1), IrqEnd{1}})
                .status()
                .code(),
            absl::StatusCode::kOutOfRange);
}

TEST(RenderEventTest, SampleFileRendersByteIdentically) {
  const std::string text = ReadTestData("sample.trace");
  absl::StatusOr<EventLog> log = ParseTrace(text, ParseMode::kStrict);
  ASSERT_TRUE(log.ok());
  EXPECT_EQ(*RenderTrace(*log), text);
}

TEST(RenderEventTest, NormalizesWhitespaceAndPadding) {
  const TraceEvent e = EventOf(ParseLine("<1h 2m 3s 4 5>  IRQ\tbegin:  7"));
  EXPECT_EQ(*RenderEvent(e), "<0001h 02m 03s 004 005> IRQ begin: 7");
}

TraceEvent RandomEvent(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> micros(0, kMaxTimestampMicros);
  std::uniform_int_distribution<std::uint32_t> id(0, 0xffffffffu);
  const Timestamp at(micros(rng));
  switch (rng() % 3) {
    case 0:
      return {at, TaskSchedule{id(rng), id(rng)}};
    case 1:
      return {at, IrqBegin{id(rng)}};
    default:
      return {at, IrqEnd{id(rng)}};
  }
}

TEST(RoundTripTest, RandomEventsSurviveRenderParse) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5000; ++i) {
    const TraceEvent e = RandomEvent(rng);
    const std::string line = *RenderEvent(e);
    const TraceEvent back = EventOf(ParseLine(line));
    EXPECT_EQ(back, e);
    EXPECT_EQ(*RenderEvent(back), line);
  }
}

TEST(RoundTripTest, EventCountMatchesContentLines) {
  std::mt19937_64 rng(99);
  std::string text;
  std::size_t content = 0;
  std::uint64_t t = 0;
  for (int i = 0; i < 500; ++i) {
    if (rng() % 5 == 0) {
      text += "\n";
      continue;
    }
    TraceEvent e = RandomEvent(rng);
    t += rng() % 1000;
    e.at = Timestamp(t);
    absl::StrAppend(&text, *RenderEvent(e), "\n");
    ++content;
  }
  absl::StatusOr<EventLog> log = ParseTrace(text, ParseMode::kStrict);
  ASSERT_TRUE(log.ok());
  EXPECT_EQ(log->events.size(), content);
}

}  // namespace
}  // namespace schedtrace
