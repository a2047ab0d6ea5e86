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

#include "schedtrace/report_render.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "json.hpp"

namespace schedtrace {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kTimeUnit = "us";
constexpr const char* kFractionUnit = "fraction";

std::string Fixed6(double v) {
  return absl::StrFormat("%.6f", v);
}

// Shortest representation that parses back to the same double.
std::string ShortestDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string Rate(double v) {
  return absl::StrFormat("%.9g", v);
}

std::string TextEntity(EntityId e) {
  return e.is_idle() ? "idle" : absl::StrCat(e.id);
}

std::string TextTimestamp(Timestamp t) {
  absl::StatusOr<std::string> s = FormatTimestamp(t);
  return s.ok() ? *s : absl::StrCat(t.micros(), " us");
}

std::string TextWindow(const AnalysisWindow& w) {
  return absl::StrCat("<", TextTimestamp(w.start), "> .. <",
                      TextTimestamp(w.end), ">  (",
                      FormatDurationHuman(w.duration()), ")");
}

class TextTable {
 public:
  explicit TextTable(std::vector<std::string> header) {
    rows_.push_back(std::move(header));
  }

  void AddRow(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string ToString() const {
    std::vector<std::size_t> widths;
    for (const auto& row : rows_) {
      widths.resize(std::max(widths.size(), row.size()), 0);
      for (std::size_t i = 0; i < row.size(); ++i)
        widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows_) {
      std::string line;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0)
          line += "  ";
        line += row[i];
        line.append(widths[i] - row[i].size(), ' ');
      }
      while (!line.empty() && line.back() == ' ')
        line.pop_back();
      absl::StrAppend(&out, line, "\n");
    }
    return out;
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

Json WindowJson(const AnalysisWindow& w) {
  Json j;
  j["start_us"] = w.start.micros();
  j["end_us"] = w.end.micros();
  return j;
}

Json UnitsJson() {
  Json j;
  j["time"] = kTimeUnit;
  j["fraction"] = kFractionUnit;
  return j;
}

void PutEntity(Json* j, EntityId e) {
  (*j)["entity"] = e.id;
  (*j)["kind"] = KindName(e.kind);
}

Json SummaryJson(const SampleSummary& s) {
  Json j;
  j["count"] = s.count;
  j["sum_us"] = s.sum_us;
  j["min_us"] = s.min_us;
  j["max_us"] = s.max_us;
  j["mean_us"] = s.mean_us;
  return j;
}

Json DistributionJson(const DistributionStats& d) {
  Json j;
  j["summary"] = SummaryJson(d.summary);
  j["histogram"]["edges_us"] = d.histogram.edges;
  j["histogram"]["counts"] = d.histogram.counts;
  if (d.exponential) {
    j["exponential"]["rate_per_us"] = d.exponential->rate_per_us;
    j["exponential"]["log_likelihood"] = d.exponential->log_likelihood;
    j["exponential"]["ks"] = d.exponential->ks;
  } else {
    j["exponential"] = nullptr;
  }
  j["zero_samples_excluded"] = d.zero_samples_excluded;
  j["uniform"]["lower_us"] = d.uniform.lower_us;
  j["uniform"]["upper_us"] = d.uniform.upper_us;
  j["uniform"]["ks"] = d.uniform.ks;
  return j;
}

EntityId EntityFromJson(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto id = j.at("entity").get<std::uint32_t>();
  if (kind == "task")
    return EntityId::Task(id);
  if (kind == "irq")
    return EntityId::Irq(id);
  throw std::invalid_argument(absl::StrCat("unknown entity kind '", kind, "'"));
}

AnalysisWindow WindowFromJson(const Json& j) {
  return {Timestamp(j.at("start_us").get<std::uint64_t>()),
          Timestamp(j.at("end_us").get<std::uint64_t>())};
}

DistributionStats DistributionFromJson(const Json& j) {
  DistributionStats d;
  const Json& s = j.at("summary");
  d.summary.count = s.at("count").get<std::size_t>();
  d.summary.sum_us = s.at("sum_us").get<std::uint64_t>();
  d.summary.min_us = s.at("min_us").get<std::uint64_t>();
  d.summary.max_us = s.at("max_us").get<std::uint64_t>();
  d.summary.mean_us = s.at("mean_us").get<double>();
  d.histogram.edges = j.at("histogram").at("edges_us").get<std::vector<double>>();
  d.histogram.counts =
      j.at("histogram").at("counts").get<std::vector<std::uint64_t>>();
  const Json& e = j.at("exponential");
  if (!e.is_null()) {
    d.exponential = ExponentialFit{e.at("rate_per_us").get<double>(),
                                   e.at("log_likelihood").get<double>(),
                                   e.at("ks").get<double>()};
  }
  d.zero_samples_excluded = j.at("zero_samples_excluded").get<std::size_t>();
  const Json& u = j.at("uniform");
  d.uniform = UniformFit{u.at("lower_us").get<std::uint64_t>(),
                         u.at("upper_us").get<std::uint64_t>(),
                         u.at("ks").get<double>()};
  return d;
}

// Runs `fn` over the parsed document, mapping JSON errors to a status.
template <typename T, typename Fn>
absl::StatusOr<T> FromJson(absl::string_view text,
                           absl::string_view expected_report,
                           Fn fn) {
  try {
    const Json j = Json::parse(text.begin(), text.end());
    if (j.at("report").get<std::string>() != expected_report) {
      return absl::InvalidArgumentError(
          absl::StrCat("not a ", expected_report, " report"));
    }
    return fn(j);
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed ", expected_report, " report: ", e.what()));
  }
}

std::string Dump(const Json& j) {
  return j.dump(2) + "\n";
}

// Average processor load.

std::string LoadText(const LoadReport& r) {
  std::string out = absl::StrCat("Average processor load\nwindow ",
                                 TextWindow(r.window), "\n\n");
  TextTable table({"entity", "kind", "net", "utilization"});
  DurationUs total = 0;
  double total_fraction = 0.0;
  for (const LoadRow& row : r.rows) {
    table.AddRow({TextEntity(row.entity), KindName(row.entity.kind),
                  FormatDurationHuman(row.net_us), Fixed6(row.utilization)});
    total += row.net_us;
    total_fraction += row.utilization;
  }
  table.AddRow({"total", "", FormatDurationHuman(total), Fixed6(total_fraction)});
  absl::StrAppend(&out, table.ToString(), "\nidle ",
                  Fixed6(r.idle_fraction), "\n");
  return out;
}

std::string LoadCsv(const LoadReport& r) {
  std::string out = "entity,kind,net_us,utilization\n";
  for (const LoadRow& row : r.rows) {
    absl::StrAppend(&out, row.entity.id, ",", KindName(row.entity.kind), ",",
                    row.net_us, ",", Fixed6(row.utilization), "\n");
  }
  return out;
}

std::string LoadJson(const LoadReport& r) {
  Json j;
  j["report"] = "load";
  j["units"] = UnitsJson();
  j["window"] = WindowJson(r.window);
  j["idle_fraction"] = r.idle_fraction;
  j["rows"] = Json::array();
  for (const LoadRow& row : r.rows) {
    Json jr;
    PutEntity(&jr, row.entity);
    jr["net_us"] = row.net_us;
    jr["utilization"] = row.utilization;
    j["rows"].push_back(std::move(jr));
  }
  return Dump(j);
}

// Processor utilization.

std::string UtilizationText(const UtilizationReport& r) {
  std::string out = absl::StrCat(
      "Processor utilization (slot width ",
      FormatDurationHuman(r.slot_width_us), ")\nrange ", TextWindow(r.range),
      "\n\n");
  std::set<EntityId> entities;
  for (const UtilizationSlot& slot : r.slots) {
    for (const SlotShare& share : slot.shares)
      entities.insert(share.entity);
  }
  std::vector<std::string> header = {"slot_start_us", "span"};
  for (EntityId e : entities)
    header.push_back(EntityLabel(e));
  TextTable table(std::move(header));
  bool any_partial = false;
  for (const UtilizationSlot& slot : r.slots) {
    std::vector<std::string> row = {
        absl::StrCat(slot.start.micros(), slot.partial ? "*" : ""),
        FormatDurationHuman(slot.span_us)};
    auto share = slot.shares.begin();
    for (EntityId e : entities) {
      if (share != slot.shares.end() && share->entity == e) {
        row.push_back(Fixed6(share->fraction));
        ++share;
      } else {
        row.push_back("-");
      }
    }
    any_partial |= slot.partial;
    table.AddRow(std::move(row));
  }
  absl::StrAppend(&out, table.ToString());
  if (any_partial)
    absl::StrAppend(&out, "\n* partial slot, normalized by its actual span\n");
  return out;
}

std::string UtilizationCsv(const UtilizationReport& r) {
  std::string out = "slot_start_us,slot_span_us,entity,kind,fraction\n";
  for (const UtilizationSlot& slot : r.slots) {
    for (const SlotShare& share : slot.shares) {
      absl::StrAppend(&out, slot.start.micros(), ",", slot.span_us, ",",
                      share.entity.id, ",", KindName(share.entity.kind), ",",
                      Fixed6(share.fraction), "\n");
    }
  }
  return out;
}

std::string UtilizationJson(const UtilizationReport& r) {
  Json j;
  j["report"] = "utilization";
  j["units"] = UnitsJson();
  j["slot_width_us"] = r.slot_width_us;
  j["range"] = WindowJson(r.range);
  j["slots"] = Json::array();
  for (const UtilizationSlot& slot : r.slots) {
    Json js;
    js["start_us"] = slot.start.micros();
    js["span_us"] = slot.span_us;
    js["partial"] = slot.partial;
    js["shares"] = Json::array();
    for (const SlotShare& share : slot.shares) {
      Json jh;
      PutEntity(&jh, share.entity);
      jh["charged_us"] = share.charged_us;
      jh["fraction"] = share.fraction;
      js["shares"].push_back(std::move(jh));
    }
    j["slots"].push_back(std::move(js));
  }
  return Dump(j);
}

// Task statistics.

std::string OptionalRate(const std::optional<ExponentialFit>& fit) {
  return fit ? Rate(fit->rate_per_us) : "-";
}

std::string OptionalKs(const std::optional<ExponentialFit>& fit) {
  return fit ? Fixed6(fit->ks) : "-";
}

void AppendHistogramText(std::string* out,
                         EntityId entity,
                         absl::string_view series,
                         const Histogram& h) {
  absl::StrAppend(out, EntityLabel(entity), " ", series, "\n");
  TextTable table({"  from_us", "to_us", "count"});
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    table.AddRow({absl::StrCat("  ", ShortestDouble(h.edges[i])),
                  ShortestDouble(h.edges[i + 1]), absl::StrCat(h.counts[i])});
  }
  absl::StrAppend(out, table.ToString());
}

std::string StatsText(const StatsReport& r) {
  std::string out = absl::StrCat("Task execution time statistics\nwindow ",
                                 TextWindow(r.window), "\n\n");
  TextTable summary({"entity", "kind", "utilization", "dispatches", "minimum",
                     "worst case", "average"});
  TextTable fits({"entity", "kind", "exp_rate_per_us", "exp_ks", "uni_lower",
                  "uni_upper", "uni_ks"});
  TextTable periods({"entity", "periods", "minimum", "worst case", "average",
                     "exp_rate_per_us", "exp_ks", "uni_lower", "uni_upper",
                     "uni_ks"});
  bool any_period = false;
  for (const EntityStats& e : r.entities) {
    const DistributionStats& x = e.execution;
    summary.AddRow({TextEntity(e.entity), KindName(e.entity.kind),
                    Fixed6(e.share), absl::StrCat(e.dispatches),
                    FormatDurationHuman(x.summary.min_us),
                    FormatDurationHuman(x.summary.max_us),
                    absl::StrFormat("%.3f us", x.summary.mean_us)});
    fits.AddRow({TextEntity(e.entity), KindName(e.entity.kind),
                 OptionalRate(x.exponential), OptionalKs(x.exponential),
                 FormatDurationHuman(x.uniform.lower_us),
                 FormatDurationHuman(x.uniform.upper_us),
                 Fixed6(x.uniform.ks)});
    if (e.period) {
      const DistributionStats& p = *e.period;
      any_period = true;
      periods.AddRow({TextEntity(e.entity), absl::StrCat(p.summary.count),
                      FormatDurationHuman(p.summary.min_us),
                      FormatDurationHuman(p.summary.max_us),
                      absl::StrFormat("%.3f us", p.summary.mean_us),
                      OptionalRate(p.exponential), OptionalKs(p.exponential),
                      FormatDurationHuman(p.uniform.lower_us),
                      FormatDurationHuman(p.uniform.upper_us),
                      Fixed6(p.uniform.ks)});
    }
  }
  absl::StrAppend(&out, summary.ToString(),
                  "\nExecution time distribution fits\n", fits.ToString());
  if (any_period)
    absl::StrAppend(&out, "\nPeriods\n", periods.ToString());
  absl::StrAppend(&out, "\nHistograms (", r.bins, " bins)\n");
  for (const EntityStats& e : r.entities) {
    AppendHistogramText(&out, e.entity, "execution", e.execution.histogram);
    if (e.period)
      AppendHistogramText(&out, e.entity, "period", e.period->histogram);
  }
  return out;
}

std::string StatsCsv(const StatsReport& r) {
  std::string out =
      "entity,kind,share,dispatches,min_us,max_us,mean_us,exp_rate_per_us,"
      "exp_ks,uni_lower_us,uni_upper_us,uni_ks\n";
  for (const EntityStats& e : r.entities) {
    const DistributionStats& x = e.execution;
    const std::string rate = x.exponential ? Rate(x.exponential->rate_per_us) : "";
    const std::string ks = x.exponential ? Fixed6(x.exponential->ks) : "";
    absl::StrAppend(&out, e.entity.id, ",", KindName(e.entity.kind), ",",
                    Fixed6(e.share), ",", e.dispatches, ",", x.summary.min_us,
                    ",", x.summary.max_us, ",", Fixed6(x.summary.mean_us), ",",
                    rate, ",", ks, ",", x.uniform.lower_us, ",",
                    x.uniform.upper_us, ",", Fixed6(x.uniform.ks), "\n");
  }
  return out;
}

std::string StatsJson(const StatsReport& r) {
  Json j;
  j["report"] = "stats";
  j["units"] = UnitsJson();
  j["window"] = WindowJson(r.window);
  j["bins"] = r.bins;
  j["entities"] = Json::array();
  for (const EntityStats& e : r.entities) {
    Json je;
    PutEntity(&je, e.entity);
    je["net_us"] = e.net_us;
    je["share"] = e.share;
    je["dispatches"] = e.dispatches;
    je["execution"] = DistributionJson(e.execution);
    je["period"] = e.period ? DistributionJson(*e.period) : Json(nullptr);
    j["entities"].push_back(std::move(je));
  }
  return Dump(j);
}

// Timeline.

std::string TimelineText(const TimelineReport& r) {
  std::string out = absl::StrCat("Task execution timeline\nrange ",
                                 TextWindow(r.range), "\n\n");
  TextTable table({"entity", "state", "start_us", "end_us", "duration"});
  for (const EntityTimeline& t : r.entities) {
    for (const TimelineSegment& s : t.segments) {
      table.AddRow({EntityLabel(t.entity), EntityStateName(s.state),
                    absl::StrCat(s.start.micros()),
                    absl::StrCat(s.end.micros()),
                    FormatDurationHuman(s.end - s.start)});
    }
  }
  absl::StrAppend(&out, table.ToString());
  return out;
}

std::string TimelineCsv(const TimelineReport& r) {
  std::string out = "entity,kind,state,start_us,end_us\n";
  for (const EntityTimeline& t : r.entities) {
    for (const TimelineSegment& s : t.segments) {
      absl::StrAppend(&out, t.entity.id, ",", KindName(t.entity.kind), ",",
                      EntityStateName(s.state), ",", s.start.micros(), ",",
                      s.end.micros(), "\n");
    }
  }
  return out;
}

std::string TimelineJson(const TimelineReport& r) {
  Json j;
  j["report"] = "timeline";
  j["units"] = UnitsJson();
  j["range"] = WindowJson(r.range);
  j["entities"] = Json::array();
  for (const EntityTimeline& t : r.entities) {
    Json je;
    PutEntity(&je, t.entity);
    je["segments"] = Json::array();
    for (const TimelineSegment& s : t.segments) {
      Json js;
      js["state"] = EntityStateName(s.state);
      js["start_us"] = s.start.micros();
      js["end_us"] = s.end.micros();
      je["segments"].push_back(std::move(js));
    }
    j["entities"].push_back(std::move(je));
  }
  return Dump(j);
}

EntityState StateFromName(const std::string& name) {
  for (EntityState s : {EntityState::kRunning, EntityState::kPreemptedByIrq,
                        EntityState::kInactive, EntityState::kActive}) {
    if (name == EntityStateName(s))
      return s;
  }
  throw std::invalid_argument(absl::StrCat("unknown state '", name, "'"));
}

}  // namespace

std::optional<OutputFormat> ParseOutputFormat(absl::string_view name) {
  if (name == "text")
    return OutputFormat::kText;
  if (name == "csv")
    return OutputFormat::kCsv;
  if (name == "json")
    return OutputFormat::kJson;
  return std::nullopt;
}

const char* OutputFormatExtension(OutputFormat format) {
  switch (format) {
    case OutputFormat::kText:
      return "txt";
    case OutputFormat::kCsv:
      return "csv";
    case OutputFormat::kJson:
      return "json";
  }
  return "txt";
}

std::string FormatDurationHuman(DurationUs us) {
  if (us < 1000)
    return absl::StrCat(us, " us");
  if (us < 1000000)
    return absl::StrFormat("%.3f ms", static_cast<double>(us) / 1e3);
  return absl::StrFormat("%.3f s", static_cast<double>(us) / 1e6);
}

std::string Render(const LoadReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::kText:
      return LoadText(report);
    case OutputFormat::kCsv:
      return LoadCsv(report);
    case OutputFormat::kJson:
      return LoadJson(report);
  }
  return {};
}

std::string Render(const UtilizationReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::kText:
      return UtilizationText(report);
    case OutputFormat::kCsv:
      return UtilizationCsv(report);
    case OutputFormat::kJson:
      return UtilizationJson(report);
  }
  return {};
}

std::string Render(const StatsReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::kText:
      return StatsText(report);
    case OutputFormat::kCsv:
      return StatsCsv(report);
    case OutputFormat::kJson:
      return StatsJson(report);
  }
  return {};
}

std::string Render(const TimelineReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::kText:
      return TimelineText(report);
    case OutputFormat::kCsv:
      return TimelineCsv(report);
    case OutputFormat::kJson:
      return TimelineJson(report);
  }
  return {};
}

std::string RenderHistogramsCsv(const StatsReport& report) {
  std::string out = "entity,kind,series,bin_lower,bin_upper,count\n";
  auto append = [&out](EntityId e, const char* series, const Histogram& h) {
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      absl::StrAppend(&out, e.id, ",", KindName(e.kind), ",", series, ",",
                      ShortestDouble(h.edges[i]), ",",
                      ShortestDouble(h.edges[i + 1]), ",", h.counts[i], "\n");
    }
  };
  for (const EntityStats& e : report.entities) {
    append(e.entity, "exec", e.execution.histogram);
    if (e.period)
      append(e.entity, "period", e.period->histogram);
  }
  return out;
}

absl::StatusOr<LoadReport> LoadReportFromJson(absl::string_view json) {
  return FromJson<LoadReport>(json, "load", [](const Json& j) {
    LoadReport r;
    r.window = WindowFromJson(j.at("window"));
    r.idle_fraction = j.at("idle_fraction").get<double>();
    for (const Json& row : j.at("rows")) {
      r.rows.push_back(LoadRow{EntityFromJson(row),
                               row.at("net_us").get<DurationUs>(),
                               row.at("utilization").get<double>()});
    }
    return r;
  });
}

absl::StatusOr<UtilizationReport> UtilizationReportFromJson(
    absl::string_view json) {
  return FromJson<UtilizationReport>(json, "utilization", [](const Json& j) {
    UtilizationReport r;
    r.slot_width_us = j.at("slot_width_us").get<DurationUs>();
    r.range = WindowFromJson(j.at("range"));
    for (const Json& js : j.at("slots")) {
      UtilizationSlot slot;
      slot.start = Timestamp(js.at("start_us").get<std::uint64_t>());
      slot.span_us = js.at("span_us").get<DurationUs>();
      slot.partial = js.at("partial").get<bool>();
      for (const Json& jh : js.at("shares")) {
        slot.shares.push_back(SlotShare{EntityFromJson(jh),
                                        jh.at("charged_us").get<DurationUs>(),
                                        jh.at("fraction").get<double>()});
      }
      r.slots.push_back(std::move(slot));
    }
    return r;
  });
}

absl::StatusOr<StatsReport> StatsReportFromJson(absl::string_view json) {
  return FromJson<StatsReport>(json, "stats", [](const Json& j) {
    StatsReport r;
    r.window = WindowFromJson(j.at("window"));
    r.bins = j.at("bins").get<std::uint32_t>();
    for (const Json& je : j.at("entities")) {
      EntityStats e;
      e.entity = EntityFromJson(je);
      e.net_us = je.at("net_us").get<DurationUs>();
      e.share = je.at("share").get<double>();
      e.dispatches = je.at("dispatches").get<std::size_t>();
      e.execution = DistributionFromJson(je.at("execution"));
      if (!je.at("period").is_null())
        e.period = DistributionFromJson(je.at("period"));
      r.entities.push_back(std::move(e));
    }
    return r;
  });
}

absl::StatusOr<TimelineReport> TimelineReportFromJson(absl::string_view json) {
  return FromJson<TimelineReport>(json, "timeline", [](const Json& j) {
    TimelineReport r;
    r.range = WindowFromJson(j.at("range"));
    for (const Json& je : j.at("entities")) {
      EntityTimeline t;
      t.entity = EntityFromJson(je);
      for (const Json& js : je.at("segments")) {
        t.segments.push_back(TimelineSegment{
            StateFromName(js.at("state").get<std::string>()),
            Timestamp(js.at("start_us").get<std::uint64_t>()),
            Timestamp(js.at("end_us").get<std::uint64_t>())});
      }
      r.entities.push_back(std::move(t));
    }
    return r;
  });
}

}  // namespace schedtrace
