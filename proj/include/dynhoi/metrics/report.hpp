// Copyright 2026 The dynhoi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dynhoi/core/io.hpp"
#include "dynhoi/metrics/success.hpp"

namespace dynhoi::metrics {

inline constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

/// All evaluation quantities of one executed episode. Metrics that are
/// undefined for the episode (too short, no contact) hold NaN.
struct MetricsReport {
  std::string task;
  std::string mode;
  std::uint64_t seed = 0;
  Style style = Style::kDance;

  double c_pct = kUndefined;
  double c_cons = kUndefined;  // m
  double pene_obj_cm = kUndefined;
  double skate_mm = kUndefined;
  double float_mm = kUndefined;
  double jitter_pos = kUndefined;  // m/s^3
  double jitter_dof = kUndefined;  // rad/s^3
  double e_hoi = kUndefined;       // m
  double duration_s = 0.0;
  bool success = false;
  std::vector<Diagnostic> diagnostics;
};

/// Seconds from the start until the pelvis first drops below the fall height
/// or the object first leaves the reference path.
inline double uninterrupted_duration(const HOIReference& executed, const HOIReference& reference,
                                     const SuccessSpec& spec) {
  const int pelvis = reference.human.skeleton.pelvis_joint;
  int n = 0;
  for (; n < executed.size(); ++n) {
    const double z = joint_positions(executed.human.skeleton, executed.human.frames[n])[pelvis].z();
    const double off = (executed.object.poses[n].position - reference.object.poses[n].position).norm();
    if (z < spec.min_pelvis_height || off > spec.object_path_tolerance) break;
  }
  return n > 0 ? (n - 1) / executed.human.fps : 0.0;
}

/// Evaluates an executed episode (possibly cut short) against its reference.
/// HOI-quality metrics are restricted to frames at or after the first
/// reference contact.
inline MetricsReport evaluate(const HOIReference& executed, const HOIReference& reference, const SuccessSpec& spec) {
  executed.validate();
  reference.validate();
  require(executed.size() <= reference.size(), ErrorKind::kStructural, "executed trajectory is longer than the reference");
  require(executed.human.fps == reference.human.fps, ErrorKind::kStructural, "executed and reference fps differ");
  const auto onset = first_contact_frame(reference.contacts);
  require(onset.has_value(), ErrorKind::kNoInteraction, "reference has no contact frames");

  MetricsReport r;
  r.style = spec.style;
  if (*onset < executed.size()) {
    r.c_pct = contact_percentage(executed.contacts, *onset);
    try {
      r.c_cons = contact_consistency(executed, *onset);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kUndefinedMetric) throw;
    }
  }
  if (executed.size() >= 4) {
    const Plausibility p = physical_plausibility(executed, spec.feet);
    r.pene_obj_cm = p.pene_obj_cm;
    r.skate_mm = p.skate_mm;
    r.float_mm = p.float_mm;
    r.jitter_pos = p.jitter_pos;
    r.jitter_dof = jitter_dof(executed.human);
  }
  HOIReference prefix = reference;
  prefix.human.frames.resize(executed.size());
  prefix.object.poses.resize(executed.size());
  prefix.contacts.frames.resize(executed.size());
  r.e_hoi = e_hoi(executed, prefix);
  r.duration_s = uninterrupted_duration(executed, reference, spec);
  const SuccessResult s = success(executed, reference, spec);
  r.success = s.success;
  r.diagnostics = s.diagnostics;
  return r;
}

namespace detail {

inline Json number_json(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline double number_from(const Json& doc, const char* key) {
  const Json& v = dynhoi::detail::field(doc, key);
  if (v.is_null()) return kUndefined;
  require(v.is_number(), ErrorKind::kParse, std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

}  // namespace detail

inline Json report_to_json(const MetricsReport& r) {
  Json diag = Json::array();
  for (const auto& d : r.diagnostics)
    diag.push_back({{"name", d.name}, {"value", d.value}, {"threshold", d.threshold}, {"passed", d.passed}});
  return {{"kind", "metrics_report"},
          {"task", r.task},
          {"mode", r.mode},
          {"seed", r.seed},
          {"style", to_string(r.style)},
          {"c_pct", detail::number_json(r.c_pct)},
          {"c_cons", detail::number_json(r.c_cons)},
          {"pene_obj_cm", detail::number_json(r.pene_obj_cm)},
          {"skate_mm", detail::number_json(r.skate_mm)},
          {"float_mm", detail::number_json(r.float_mm)},
          {"jitter_pos", detail::number_json(r.jitter_pos)},
          {"jitter_dof", detail::number_json(r.jitter_dof)},
          {"e_hoi", detail::number_json(r.e_hoi)},
          {"duration_s", r.duration_s},
          {"success", r.success},
          {"diagnostics", diag}};
}

inline MetricsReport report_from_json(const Json& doc) {
  require(doc.is_object() && doc.value("kind", "") == "metrics_report", ErrorKind::kParse, "not a metrics report");
  MetricsReport r;
  try {
    r.task = dynhoi::detail::field(doc, "task").get<std::string>();
    r.mode = dynhoi::detail::field(doc, "mode").get<std::string>();
    r.seed = dynhoi::detail::field(doc, "seed").get<std::uint64_t>();
    r.style = parse_style(dynhoi::detail::field(doc, "style").get<std::string>());
    r.success = dynhoi::detail::field(doc, "success").get<bool>();
    r.duration_s = dynhoi::detail::field(doc, "duration_s").get<double>();
    for (const Json& d : dynhoi::detail::field(doc, "diagnostics"))
      r.diagnostics.push_back({d.at("name").get<std::string>(), d.at("value").get<double>(),
                               d.at("threshold").get<double>(), d.at("passed").get<bool>()});
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("metrics report: ") + e.what());
  }
  r.c_pct = detail::number_from(doc, "c_pct");
  r.c_cons = detail::number_from(doc, "c_cons");
  r.pene_obj_cm = detail::number_from(doc, "pene_obj_cm");
  r.skate_mm = detail::number_from(doc, "skate_mm");
  r.float_mm = detail::number_from(doc, "float_mm");
  r.jitter_pos = detail::number_from(doc, "jitter_pos");
  r.jitter_dof = detail::number_from(doc, "jitter_dof");
  r.e_hoi = detail::number_from(doc, "e_hoi");
  return r;
}

/// Fixed-precision rendering used by every CSV so repeated runs are
/// byte-identical.
inline std::string format_number(double v, int precision = 6) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string out = buf;
  if (out.front() == '-' && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

inline std::string report_csv_header() {
  return "task,mode,seed,style,success,duration_s,c_pct,c_cons,pene_obj_cm,skate_mm,float_mm,jitter_pos,"
         "jitter_dof,e_hoi\n";
}

inline std::string report_csv_row(const MetricsReport& r) {
  std::ostringstream os;
  os << r.task << ',' << r.mode << ',' << r.seed << ',' << to_string(r.style) << ',' << (r.success ? 1 : 0) << ','
     << format_number(r.duration_s) << ',' << format_number(r.c_pct) << ',' << format_number(r.c_cons, 9) << ','
     << format_number(r.pene_obj_cm) << ',' << format_number(r.skate_mm) << ',' << format_number(r.float_mm) << ','
     << format_number(r.jitter_pos) << ',' << format_number(r.jitter_dof) << ',' << format_number(r.e_hoi) << '\n';
  return os.str();
}

/// Means over a group of reports. Undefined per-episode values are skipped;
/// a column with no defined value stays NaN.
struct Summary {
  int episodes = 0;
  double sr = 0.0;
  double duration_s = 0.0;
  double e_hoi = kUndefined;
  double jitter_dof = kUndefined;
  double c_pct = kUndefined;
  double c_cons = kUndefined;
  double pene_obj_cm = kUndefined;
  double skate_mm = kUndefined;
  double float_mm = kUndefined;
  double jitter_pos = kUndefined;
};

inline Summary aggregate(std::span<const MetricsReport> reports) {
  require(!reports.empty(), ErrorKind::kUndefinedMetric, "no reports to aggregate");
  Summary s;
  s.episodes = static_cast<int>(reports.size());
  auto mean_of = [&](double MetricsReport::*field) {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : reports)
      if (std::isfinite(r.*field)) {
        sum += r.*field;
        ++count;
      }
    return count > 0 ? sum / count : kUndefined;
  };
  int wins = 0;
  for (const auto& r : reports) wins += r.success ? 1 : 0;
  s.sr = static_cast<double>(wins) / s.episodes;
  s.duration_s = mean_of(&MetricsReport::duration_s);
  s.e_hoi = mean_of(&MetricsReport::e_hoi);
  s.jitter_dof = mean_of(&MetricsReport::jitter_dof);
  s.c_pct = mean_of(&MetricsReport::c_pct);
  s.c_cons = mean_of(&MetricsReport::c_cons);
  s.pene_obj_cm = mean_of(&MetricsReport::pene_obj_cm);
  s.skate_mm = mean_of(&MetricsReport::skate_mm);
  s.float_mm = mean_of(&MetricsReport::float_mm);
  s.jitter_pos = mean_of(&MetricsReport::jitter_pos);
  return s;
}

inline std::string imitation_csv_header() { return "task,mode,episodes,SR,D,E_HOI,Jitter_DoF\n"; }

inline std::string imitation_csv_row(const std::string& task, const std::string& mode, const Summary& s) {
  return task + ',' + mode + ',' + std::to_string(s.episodes) + ',' + format_number(s.sr, 3) + ',' +
         format_number(s.duration_s, 3) + ',' + format_number(s.e_hoi) + ',' + format_number(s.jitter_dof) + '\n';
}

inline std::string quality_csv_header() {
  return "task,mode,episodes,C_pct,C_cons,Pene_obj_cm,Skate_mm,Float_mm,Jitter_pos\n";
}

inline std::string quality_csv_row(const std::string& task, const std::string& mode, const Summary& s) {
  return task + ',' + mode + ',' + std::to_string(s.episodes) + ',' + format_number(s.c_pct, 4) + ',' +
         format_number(s.c_cons, 9) + ',' + format_number(s.pene_obj_cm) + ',' + format_number(s.skate_mm) + ',' +
         format_number(s.float_mm) + ',' + format_number(s.jitter_pos) + '\n';
}

/// Aligned plain-text table for terminals.
inline std::string summary_table(const std::vector<std::pair<std::string, Summary>>& rows) {
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-32s %8s %6s %8s %10s %12s\n", "group", "episodes", "SR", "D (s)", "E_HOI (m)",
                "Jitter_DoF");
  out += buf;
  for (const auto& [name, s] : rows) {
    std::snprintf(buf, sizeof buf, "%-32s %8d %6.3f %8.3f %10s %12s\n", name.c_str(), s.episodes, s.sr, s.duration_s,
                  format_number(s.e_hoi, 4).c_str(), format_number(s.jitter_dof, 2).c_str());
    out += buf;
  }
  return out;
}

}  // namespace dynhoi::metrics
