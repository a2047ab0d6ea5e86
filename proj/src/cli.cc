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

#include "schedtrace/cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <type_traits>
#include <utility>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "schedtrace/execution_builder.h"
#include "schedtrace/report_render.h"
#include "schedtrace/reports.h"
#include "schedtrace/synthgen.h"
#include "schedtrace/trace_parser.h"

namespace schedtrace {
namespace {

namespace fs = std::filesystem;

struct AnalyzeConfig {
  std::vector<std::string> traces;
  std::vector<std::string> reports;
  DurationUs slot_width_us = kDefaultSlotWidthUs;
  std::optional<std::uint64_t> from_us;
  std::optional<std::uint64_t> to_us;
  std::uint32_t bins = kDefaultHistogramBins;
  bool lenient = false;
  std::string format = "text";
  std::string output_dir;
};

struct ValidateConfig {
  std::vector<std::string> traces;
  bool lenient = false;
};

struct GenerateConfig {
  std::string script;
  std::optional<std::uint64_t> seed;
  RandomScenarioOptions random;
  std::string output_dir;
};

// Outcome of one pipeline stage: an exit code plus a message for `err`.
struct Failure {
  int code = kExitTraceError;
  std::string message;
};

absl::StatusOr<std::string> ReadInput(const std::string& path,
                                      std::istream& in) {
  if (path == "-")
    return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream file(path, std::ios::binary);
  if (!file)
    return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  return std::string(std::istreambuf_iterator<char>(file), {});
}

absl::Status WriteFile(const fs::path& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  file << contents;
  if (!file)
    return absl::UnavailableError(
        absl::StrCat("cannot write '", path.string(), "'"));
  return absl::OkStatus();
}

absl::Status MakeDirectory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create directory '", dir.string(), "': ", ec.message()));
  }
  return absl::OkStatus();
}

std::string Label(const std::string& path) {
  return path == "-" ? "<stdin>" : path;
}

// Parses and replays one trace, reporting lenient-mode repairs to `err`.
std::optional<Failure> LoadSlices(const std::string& path,
                                  bool lenient,
                                  std::istream& in,
                                  std::ostream& err,
                                  SliceSet* out) {
  absl::StatusOr<std::string> text = ReadInput(path, in);
  if (!text.ok())
    return Failure{kExitTraceError, std::string(text.status().message())};
  const ParseMode parse_mode = lenient ? ParseMode::kLenient : ParseMode::kStrict;
  absl::StatusOr<EventLog> log = ParseTrace(*text, parse_mode);
  if (!log.ok()) {
    return Failure{kExitTraceError,
                   absl::StrCat(Label(path), ": ", log.status().message())};
  }
  for (const ParseDiagnostic& d : log->diagnostics) {
    err << Label(path) << ":" << d.line << ": warning: "
        << ParseDiagnosticKindName(d.kind) << ": " << d.message << "\n";
  }
  std::vector<ConsistencyViolation> violations;
  absl::StatusOr<SliceSet> slices = BuildSlices(
      *log, lenient ? ReplayMode::kLenient : ReplayMode::kStrict, &violations);
  if (!slices.ok()) {
    const int code = violations.empty() ? kExitTraceError : kExitConsistency;
    return Failure{code,
                   absl::StrCat(Label(path), ": ", slices.status().message())};
  }
  for (const ConsistencyViolation& v : violations) {
    err << Label(path) << ": warning: " << ViolationKindName(v.kind) << " at "
        << v.at.micros() << " us: " << v.detail << "\n";
  }
  *out = *std::move(slices);
  return std::nullopt;
}

struct RenderedReport {
  std::string name;
  std::string body;
  // Extra files written alongside in an output directory.
  std::vector<std::pair<std::string, std::string>> attachments;
};

template <typename Report>
std::optional<Failure> AddReport(const std::string& path,
                                 const std::string& name,
                                 absl::StatusOr<Report> report,
                                 OutputFormat format,
                                 std::vector<RenderedReport>* out) {
  if (!report.ok()) {
    return Failure{kExitTraceError, absl::StrCat(Label(path), ": ", name, ": ",
                                                 report.status().message())};
  }
  RenderedReport rendered{name, Render(*report, format), {}};
  if constexpr (std::is_same_v<Report, StatsReport>) {
    if (format == OutputFormat::kCsv) {
      rendered.attachments.emplace_back("stats_histograms.csv",
                                        RenderHistogramsCsv(*report));
    }
  }
  out->push_back(std::move(rendered));
  return std::nullopt;
}

int Analyze(const AnalyzeConfig& config,
            std::istream& in,
            std::ostream& out,
            std::ostream& err) {
  const OutputFormat format = *ParseOutputFormat(config.format);
  if (config.from_us && config.to_us && *config.from_us >= *config.to_us) {
    err << "error: --from-us must be less than --to-us\n";
    return kExitUsage;
  }
  std::vector<std::string> reports;
  for (const std::string& r : config.reports) {
    if (std::find(reports.begin(), reports.end(), r) == reports.end())
      reports.push_back(r);
  }

  const bool many = config.traces.size() > 1;
  for (std::size_t i = 0; i < config.traces.size(); ++i) {
    const std::string& path = config.traces[i];
    SliceSet slices;
    if (std::optional<Failure> f =
            LoadSlices(path, config.lenient, in, err, &slices)) {
      err << "error: " << f->message << "\n";
      return f->code;
    }

    std::optional<AnalysisWindow> zoom;
    if (config.from_us || config.to_us) {
      zoom = AnalysisWindow{
          config.from_us ? Timestamp(*config.from_us) : slices.window.start,
          config.to_us ? Timestamp(*config.to_us) : slices.window.end};
    }

    std::vector<RenderedReport> rendered;
    for (const std::string& name : reports) {
      std::optional<Failure> f;
      if (name == "load") {
        f = AddReport(path, name, AverageLoad(slices), format, &rendered);
      } else if (name == "utilization") {
        f = AddReport(path, name,
                      Utilization(slices, config.slot_width_us, zoom), format,
                      &rendered);
      } else if (name == "stats") {
        f = AddReport(path, name, TaskStatistics(slices, config.bins), format,
                      &rendered);
      } else {
        f = AddReport(path, name, Timeline(slices, zoom), format, &rendered);
      }
      if (f) {
        err << "error: " << f->message << "\n";
        return f->code;
      }
    }

    if (!config.output_dir.empty()) {
      fs::path dir(config.output_dir);
      if (many) {
        const std::string stem =
            path == "-" ? "stdin" : fs::path(path).stem().string();
        dir /= absl::StrCat(i, "_", stem);
      }
      absl::Status status = MakeDirectory(dir);
      for (const RenderedReport& r : rendered) {
        if (!status.ok())
          break;
        status = WriteFile(
            dir / absl::StrCat(r.name, ".", OutputFormatExtension(format)),
            r.body);
        for (const auto& [file, body] : r.attachments) {
          if (status.ok())
            status = WriteFile(dir / file, body);
        }
      }
      if (!status.ok()) {
        err << "error: " << status.message() << "\n";
        return kExitTraceError;
      }
      continue;
    }

    if (many)
      out << (i > 0 ? "\n" : "") << "==> " << Label(path) << " <==\n";
    for (std::size_t r = 0; r < rendered.size(); ++r)
      out << (r > 0 ? "\n" : "") << rendered[r].body;
  }
  return kExitOk;
}

int Validate(const ValidateConfig& config,
             std::istream& in,
             std::ostream& out,
             std::ostream& err) {
  int code = kExitOk;
  for (const std::string& path : config.traces) {
    absl::StatusOr<std::string> text = ReadInput(path, in);
    if (!text.ok()) {
      err << "error: " << text.status().message() << "\n";
      return kExitTraceError;
    }
    absl::StatusOr<EventLog> log = ParseTrace(
        *text, config.lenient ? ParseMode::kLenient : ParseMode::kStrict);
    if (!log.ok()) {
      err << "error: " << Label(path) << ": " << log.status().message()
          << "\n";
      return kExitTraceError;
    }
    for (const ParseDiagnostic& d : log->diagnostics) {
      err << Label(path) << ":" << d.line << ": warning: "
          << ParseDiagnosticKindName(d.kind) << ": " << d.message << "\n";
    }
    const std::vector<ConsistencyViolation> violations =
        ValidateConsistency(*log);
    for (const ConsistencyViolation& v : violations) {
      out << Label(path) << ": " << v.at.micros() << " us: "
          << ViolationKindName(v.kind) << ": " << v.detail << "\n";
    }
    if (violations.empty()) {
      out << Label(path) << ": ok, " << log->events.size()
          << " events, no violations\n";
    } else {
      code = kExitConsistency;
    }
  }
  return code;
}

int Generate(const GenerateConfig& config,
             std::istream& in,
             std::ostream& out,
             std::ostream& err) {
  Scenario scenario;
  if (config.seed) {
    scenario = RandomScenario(*config.seed, config.random);
  } else {
    absl::StatusOr<std::string> text = ReadInput(config.script, in);
    if (!text.ok()) {
      err << "error: " << text.status().message() << "\n";
      return kExitTraceError;
    }
    absl::StatusOr<Scenario> parsed = ParseScript(*text);
    if (!parsed.ok()) {
      err << "error: " << Label(config.script) << ": "
          << parsed.status().message() << "\n";
      return kExitTraceError;
    }
    scenario = *std::move(parsed);
  }
  absl::StatusOr<GeneratedTrace> generated = GenerateTrace(scenario);
  if (!generated.ok()) {
    err << "error: " << generated.status().message() << "\n";
    return kExitTraceError;
  }
  if (config.output_dir.empty()) {
    out << generated->text;
    return kExitOk;
  }
  const fs::path dir(config.output_dir);
  absl::Status status = MakeDirectory(dir);
  if (status.ok())
    status = WriteFile(dir / "trace.txt", generated->text);
  if (status.ok())
    status = WriteFile(dir / "manifest.csv",
                       RenderManifestCsv(generated->manifest));
  if (!status.ok()) {
    err << "error: " << status.message() << "\n";
    return kExitTraceError;
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args,
           std::istream& in,
           std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Post-mortem scheduler trace analysis", "schedtrace"};
  app.require_subcommand(1);

  AnalyzeConfig analyze;
  CLI::App* analyze_cmd =
      app.add_subcommand("analyze", "Compute reports from trace files");
  analyze_cmd->add_option("traces", analyze.traces, "Trace files ('-' = stdin)")
      ->required();
  analyze_cmd
      ->add_option("--report", analyze.reports,
                   "Report to produce; repeatable")
      ->required()
      ->check(CLI::IsMember({"load", "utilization", "stats", "timeline"}));
  analyze_cmd
      ->add_option("--slot-width-us", analyze.slot_width_us,
                   "Utilization timeslot width")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--from-us", analyze.from_us,
                          "Zoom range start, absolute trace microseconds");
  analyze_cmd->add_option("--to-us", analyze.to_us,
                          "Zoom range end, absolute trace microseconds");
  analyze_cmd->add_option("--bins", analyze.bins, "Histogram bins")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  analyze_cmd->add_flag("--lenient", analyze.lenient,
                        "Skip bad lines and repair inconsistencies");
  analyze_cmd->add_option("--format", analyze.format, "Output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"text", "csv", "json"}));
  analyze_cmd->add_option("-o,--output", analyze.output_dir,
                          "Write one file per report into this directory");

  ValidateConfig validate;
  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "Check traces for scheduling/IRQ consistency");
  validate_cmd
      ->add_option("traces", validate.traces, "Trace files ('-' = stdin)")
      ->required();
  validate_cmd->add_flag("--lenient", validate.lenient,
                         "Skip unparsable lines");

  GenerateConfig generate;
  CLI::App* generate_cmd = app.add_subcommand(
      "generate", "Write a synthetic trace and its ground-truth manifest");
  CLI::Option* script_opt = generate_cmd->add_option(
      "script", generate.script, "Scenario script ('-' = stdin)");
  CLI::Option* seed_opt = generate_cmd->add_option(
      "--seed", generate.seed, "Generate a random scenario with this seed");
  script_opt->excludes(seed_opt);
  generate_cmd->add_option("--tasks", generate.random.tasks, "Random: tasks")
      ->capture_default_str()
      ->needs(seed_opt);
  generate_cmd->add_option("--runs", generate.random.runs, "Random: runs")
      ->capture_default_str()
      ->needs(seed_opt);
  generate_cmd
      ->add_option("--max-gross-us", generate.random.max_gross_us,
                   "Random: longest run")
      ->capture_default_str()
      ->needs(seed_opt);
  generate_cmd
      ->add_option("--irq-probability", generate.random.irq_probability,
                   "Random: IRQ placement probability")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0))
      ->needs(seed_opt);
  generate_cmd->add_option("-o,--output", generate.output_dir,
                           "Directory for trace.txt and manifest.csv");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (generate_cmd->parsed() && generate.script.empty() && !generate.seed)
      throw CLI::RequiredError("script or --seed");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (analyze_cmd->parsed())
    return Analyze(analyze, in, out, err);
  if (validate_cmd->parsed())
    return Validate(validate, in, out, err);
  return Generate(generate, in, out, err);
}

}  // namespace schedtrace
