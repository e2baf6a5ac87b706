#include <cstdio>
#include <string>

#include "json.hpp"
#include "segtrack/analytics.hpp"
#include "segtrack/error.hpp"

namespace segtrack {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string percent_cell(const std::optional<double>& v) {
  return v ? fixed(*v * 100.0, 3) : "-";
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

std::string emit_report(const ApReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    ordered_json rows = ordered_json::array();
    for (const ApRow& r : report.rows) {
      ordered_json j = ordered_json::object();
      j["category"] = r.name;
      j["AP"] = optional_json(r.ap);
      j["AP50"] = optional_json(r.ap50);
      j["AP75"] = optional_json(r.ap75);
      j["APS"] = optional_json(r.aps);
      j["APM"] = optional_json(r.apm);
      j["APL"] = optional_json(r.apl);
      rows.push_back(std::move(j));
    }
    ordered_json root = ordered_json::object();
    root["rows"] = std::move(rows);
    return root.dump(2) + "\n";
  }
  std::string out = "category,AP,AP50,AP75,APS,APM,APL\n";
  for (const ApRow& r : report.rows) {
    out += csv_field(r.name);
    for (const auto* v : {&r.ap, &r.ap50, &r.ap75, &r.aps, &r.apm, &r.apl}) {
      out += ',' + percent_cell(*v);
    }
    out += '\n';
  }
  return out;
}

ApReport read_ap_report_json(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParseError, e.what());
  }
  ApReport report;
  if (!root.is_object() || !root.contains("rows") || !root["rows"].is_array()) {
    throw Error(ErrorKind::kSchemaError, "AP report needs a 'rows' array");
  }
  for (const auto& j : root["rows"]) {
    ApRow r;
    r.name = j.at("category").get<std::string>();
    auto get = [&](const char* key) -> std::optional<double> {
      if (!j.contains(key) || j[key].is_null()) return std::nullopt;
      return j[key].get<double>();
    };
    r.ap = get("AP");
    r.ap50 = get("AP50");
    r.ap75 = get("AP75");
    r.aps = get("APS");
    r.apm = get("APM");
    r.apl = get("APL");
    report.rows.push_back(std::move(r));
  }
  return report;
}

std::string emit_report(const std::vector<MotSummary>& rows, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    ordered_json out = ordered_json::array();
    for (const MotSummary& s : rows) {
      ordered_json j = ordered_json::object();
      j["video"] = s.video;
      j["n_frames"] = s.report.n_frames;
      j["n_gt"] = s.report.n_gt;
      j["fn"] = s.report.false_negatives;
      j["fp"] = s.report.false_positives;
      j["ids"] = s.report.id_switches;
      j["mota"] = s.report.mota;
      j["motp"] = s.report.motp;
      out.push_back(std::move(j));
    }
    return out.dump(2) + "\n";
  }
  std::string out = "video,n_frames,n_gt,fn,fp,ids,mota,motp\n";
  for (const MotSummary& s : rows) {
    const MotReport& r = s.report;
    out += csv_field(s.video) + ',' + std::to_string(r.n_frames) + ',' + std::to_string(r.n_gt) +
           ',' + std::to_string(r.false_negatives) + ',' + std::to_string(r.false_positives) +
           ',' + std::to_string(r.id_switches) + ',' + fixed(r.mota, 6) + ',' +
           fixed(r.motp, 6) + '\n';
  }
  return out;
}

std::string emit_report(const std::vector<TrajectoryStats>& rows, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    ordered_json out = ordered_json::array();
    for (const TrajectoryStats& s : rows) {
      ordered_json j = ordered_json::object();
      j["label"] = s.label;
      j["distance_traveled"] = s.distance_traveled;
      j["frames_present"] = s.frames_present;
      j["mean_speed"] = s.mean_speed;
      out.push_back(std::move(j));
    }
    return out.dump(2) + "\n";
  }
  std::string out = "label,distance_traveled,frames_present,mean_speed\n";
  for (const TrajectoryStats& s : rows) {
    out += csv_field(s.label) + ',' + fixed(s.distance_traveled, 3) + ',' +
           std::to_string(s.frames_present) + ',' + fixed(s.mean_speed, 3) + '\n';
  }
  return out;
}

}  // namespace segtrack
