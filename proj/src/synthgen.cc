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

#include "schedtrace/synthgen.h"

#include <algorithm>
#include <random>
#include <utility>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "schedtrace/trace_parser.h"

namespace schedtrace {
namespace {

DurationUs EndOf(const IrqSpec& irq) {
  return irq.offset_us + irq.length_us;
}

// `irq` against its run and the IRQs already accepted for it.
absl::Status CheckIrq(const Run& run,
                      const IrqSpec& irq,
                      std::size_t accepted) {
  if (irq.length_us == 0)
    return absl::InvalidArgumentError(
        absl::StrCat("IRQ ", irq.irq, " has zero length"));
  if (irq.offset_us == 0 || EndOf(irq) >= run.gross_us ||
      EndOf(irq) < irq.offset_us) {
    return absl::InvalidArgumentError(absl::StrCat(
        "IRQ ", irq.irq, " [", irq.offset_us, ", ", EndOf(irq),
        ") must lie strictly inside its run of ", run.gross_us, " us"));
  }
  for (std::size_t i = 0; i < accepted; ++i) {
    const IrqSpec& other = run.irqs[i];
    const bool apart = EndOf(irq) < other.offset_us ||
                       EndOf(other) < irq.offset_us;
    const bool inside = other.offset_us < irq.offset_us &&
                        EndOf(irq) < EndOf(other);
    const bool around = irq.offset_us < other.offset_us &&
                        EndOf(other) < EndOf(irq);
    if (!apart && !inside && !around) {
      return absl::InvalidArgumentError(absl::StrCat(
          "IRQ ", irq.irq, " at ", irq.offset_us,
          " neither nests strictly within nor is separated from IRQ ",
          other.irq, " at ", other.offset_us));
    }
  }
  return absl::OkStatus();
}

absl::Status CheckRun(const Run& run) {
  if (run.gross_us == 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("run of task ", run.task, " has zero duration"));
  }
  return absl::OkStatus();
}

absl::Status ScriptError(std::size_t line, const absl::Status& cause) {
  return absl::InvalidArgumentError(
      absl::StrCat("line ", line, ": ", cause.message()));
}

template <typename T>
bool ParseNumber(absl::string_view token, T* out) {
  return absl::SimpleAtoi(token, out);
}

// IRQs of one run ordered by offset with enclosing IRQs first, as emitted.
std::vector<IrqSpec> SortedIrqs(const Run& run) {
  std::vector<IrqSpec> irqs = run.irqs;
  std::sort(irqs.begin(), irqs.end(), [](const IrqSpec& a, const IrqSpec& b) {
    if (a.offset_us != b.offset_us)
      return a.offset_us < b.offset_us;
    return a.length_us > b.length_us;
  });
  return irqs;
}

void PlaceIrqs(std::mt19937_64& rng,
               const RandomScenarioOptions& options,
               DurationUs lo,
               DurationUs hi,
               int depth,
               std::vector<IrqSpec>* out) {
  std::bernoulli_distribution fire(options.irq_probability);
  std::uniform_int_distribution<std::uint32_t> pick_id(
      0, std::max<std::uint32_t>(options.irq_ids, 1) - 1);
  DurationUs cursor = lo;
  while (hi - cursor >= 3 && fire(rng)) {
    const DurationUs begin =
        std::uniform_int_distribution<DurationUs>(cursor + 1, hi - 2)(rng);
    const DurationUs end =
        std::uniform_int_distribution<DurationUs>(begin + 1, hi - 1)(rng);
    out->push_back(IrqSpec{pick_id(rng), begin, end - begin});
    if (depth < 3)
      PlaceIrqs(rng, options, begin, end, depth + 1, out);
    cursor = end;
  }
}

}  // namespace

absl::Status ValidateScenario(const Scenario& scenario) {
  if (scenario.runs.empty())
    return absl::InvalidArgumentError("scenario has no runs");
  for (std::size_t r = 0; r < scenario.runs.size(); ++r) {
    const Run& run = scenario.runs[r];
    absl::Status status = CheckRun(run);
    for (std::size_t i = 0; status.ok() && i < run.irqs.size(); ++i)
      status = CheckIrq(run, run.irqs[i], i);
    if (!status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("run ", r, ": ", status.message()));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<Scenario> ParseScript(absl::string_view text) {
  Scenario scenario;
  std::size_t line_number = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_number;
    line = line.substr(0, line.find('#'));
    std::vector<absl::string_view> tokens =
        absl::StrSplit(line, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    if (tokens.empty())
      continue;
    const absl::string_view keyword = tokens[0];
    auto bad_syntax = [&] {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": cannot parse '", line, "'"));
    };

    if (keyword == "run") {
      Run run;
      if (tokens.size() != 3 || !ParseNumber(tokens[1], &run.task) ||
          !ParseNumber(tokens[2], &run.gross_us))
        return bad_syntax();
      if (absl::Status s = CheckRun(run); !s.ok())
        return ScriptError(line_number, s);
      scenario.runs.push_back(std::move(run));
    } else if (keyword == "irq") {
      IrqSpec irq;
      if (tokens.size() != 4 || !ParseNumber(tokens[1], &irq.irq) ||
          !ParseNumber(tokens[2], &irq.offset_us) ||
          !ParseNumber(tokens[3], &irq.length_us))
        return bad_syntax();
      if (scenario.runs.empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_number, ": irq outside of a run"));
      }
      Run& run = scenario.runs.back();
      if (absl::Status s = CheckIrq(run, irq, run.irqs.size()); !s.ok())
        return ScriptError(line_number, s);
      run.irqs.push_back(irq);
    } else if (keyword == "start") {
      std::uint64_t micros = 0;
      if (tokens.size() != 2 || !ParseNumber(tokens[1], &micros))
        return bad_syntax();
      scenario.start = Timestamp(micros);
    } else if (keyword == "prior") {
      if (tokens.size() != 2 || !ParseNumber(tokens[1], &scenario.prior_task))
        return bad_syntax();
    } else if (keyword == "final") {
      if (tokens.size() != 2 || !ParseNumber(tokens[1], &scenario.final_task))
        return bad_syntax();
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "line ", line_number, ": unknown directive '", keyword, "'"));
    }
  }
  if (scenario.runs.empty())
    return absl::InvalidArgumentError("script defines no runs");
  return scenario;
}

absl::StatusOr<GeneratedTrace> GenerateTrace(const Scenario& scenario) {
  if (absl::Status s = ValidateScenario(scenario); !s.ok())
    return s;

  EventLog log;
  Manifest manifest;
  std::map<std::uint32_t, std::vector<Timestamp>> schedule_ins;

  Timestamp t = scenario.start;
  std::uint32_t previous = scenario.prior_task;
  for (const Run& run : scenario.runs) {
    if (t.micros() > kMaxTimestampMicros ||
        run.gross_us > kMaxTimestampMicros - t.micros()) {
      return absl::OutOfRangeError(
          "scenario runs past the largest trace timestamp");
    }
    log.events.push_back(TraceEvent{t, TaskSchedule{previous, run.task}});
    schedule_ins[run.task].push_back(t);

    // Net time of each IRQ is its length minus its direct children; the
    // task loses only the top-level IRQs.
    const std::vector<IrqSpec> irqs = SortedIrqs(run);
    std::vector<DurationUs> irq_net(irqs.size());
    std::vector<std::size_t> open;
    DurationUs task_net = run.gross_us;
    std::vector<std::pair<DurationUs, EventPayload>> irq_events;
    for (std::size_t i = 0; i < irqs.size(); ++i) {
      const IrqSpec& irq = irqs[i];
      while (!open.empty() && EndOf(irqs[open.back()]) <= irq.offset_us)
        open.pop_back();
      if (open.empty())
        task_net -= irq.length_us;
      else
        irq_net[open.back()] -= irq.length_us;
      irq_net[i] = irq.length_us;
      open.push_back(i);
      irq_events.emplace_back(irq.offset_us, IrqBegin{irq.irq});
      irq_events.emplace_back(EndOf(irq), IrqEnd{irq.irq});
    }
    std::sort(irq_events.begin(), irq_events.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [offset, payload] : irq_events)
      log.events.push_back(TraceEvent{t + offset, std::move(payload)});

    const EntityId task = EntityId::Task(run.task);
    manifest.net_us[task] += task_net;
    manifest.execution_us[task].push_back(task_net);
    for (std::size_t i = 0; i < irqs.size(); ++i) {
      const EntityId irq = EntityId::Irq(irqs[i].irq);
      manifest.net_us[irq] += irq_net[i];
      manifest.execution_us[irq].push_back(irq_net[i]);
    }
    t = t + run.gross_us;
    previous = run.task;
  }
  log.events.push_back(
      TraceEvent{t, TaskSchedule{previous, scenario.final_task}});
  schedule_ins[scenario.final_task].push_back(t);
  manifest.window_us = t - scenario.start;

  for (const auto& [id, ins] : schedule_ins) {
    if (ins.size() < 2)
      continue;
    std::vector<DurationUs>& periods = manifest.period_us[EntityId::Task(id)];
    for (std::size_t i = 1; i < ins.size(); ++i)
      periods.push_back(ins[i] - ins[i - 1]);
  }

  absl::StatusOr<std::string> text = RenderTrace(log);
  if (!text.ok())
    return text.status();
  return GeneratedTrace{*std::move(text), std::move(manifest)};
}

Scenario RandomScenario(std::uint64_t seed,
                        const RandomScenarioOptions& options) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> pick_task(
      0, std::max<std::uint32_t>(options.tasks, 1) - 1);
  std::uniform_int_distribution<DurationUs> pick_gross(
      1, std::max<DurationUs>(options.max_gross_us, 1));

  Scenario scenario;
  scenario.start =
      Timestamp(std::uniform_int_distribution<std::uint64_t>(0, 1000000000)(rng));
  scenario.prior_task = pick_task(rng);
  scenario.runs.reserve(options.runs);
  for (std::uint32_t i = 0; i < std::max<std::uint32_t>(options.runs, 1); ++i) {
    Run run;
    run.task = pick_task(rng);
    run.gross_us = pick_gross(rng);
    PlaceIrqs(rng, options, 0, run.gross_us, 0, &run.irqs);
    scenario.runs.push_back(std::move(run));
  }
  scenario.final_task = pick_task(rng);
  return scenario;
}

std::string RenderManifestCsv(const Manifest& manifest) {
  std::string out = "entity,kind,net_us\n";
  for (const auto& [entity, net] : manifest.net_us)
    absl::StrAppend(&out, entity.id, ",", KindName(entity.kind), ",", net, "\n");
  absl::StrAppend(&out, "window_us,,", manifest.window_us, "\n");
  return out;
}

}  // namespace schedtrace
