#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>

#include "segtrack/error.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack {

namespace {

constexpr const char* kHeader = "frame,label,present,cx,cy,score,interpolated";

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

void write_tracks_csv(std::ostream& out, const std::vector<Track>& tracks) {
  std::vector<std::tuple<std::int64_t, const std::string*, const TrackState*>> rows;
  for (const Track& t : tracks) {
    for (const TrackState& s : t.states) rows.emplace_back(s.frame, &t.label, &s);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
    return *std::get<1>(a) < *std::get<1>(b);
  });
  out << kHeader << '\n';
  for (const auto& [frame, label, s] : rows) {
    out << frame << ',' << quote(*label) << ',' << (s->present ? 1 : 0) << ',';
    if (s->present) {
      out << fixed(s->centroid.x, 3) << ',' << fixed(s->centroid.y, 3) << ','
          << fixed(s->score, 4);
    } else {
      out << ",,";
    }
    out << ',' << (s->interpolated ? 1 : 0) << '\n';
  }
}

std::vector<Track> read_tracks_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || split_csv(line) != split_csv(kHeader)) {
    throw Error(ErrorKind::kSchemaError, std::string("line 1: expected header '") + kHeader + "'");
  }
  std::map<std::string, Track> by_label;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    const std::string where = "line " + std::to_string(line_no);
    if (f.size() != 7) throw Error(ErrorKind::kSchemaError, where + ": expected 7 columns");
    try {
      TrackState s;
      s.frame = std::stoll(f[0]);
      s.present = f[2] == "1";
      if (s.present) {
        s.centroid = {std::stod(f[3]), std::stod(f[4])};
        s.score = f[5].empty() ? 0.0 : std::stod(f[5]);
      }
      s.interpolated = f[6] == "1";
      Track& t = by_label[f[1]];
      t.label = f[1];
      if (!t.states.empty() && t.states.back().frame >= s.frame) {
        throw Error(ErrorKind::kSchemaError, where + ": frames must increase per label");
      }
      t.states.push_back(s);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::kSchemaError, where + ": malformed number");
    }
  }
  std::vector<Track> out;
  for (auto& [label, t] : by_label) out.push_back(std::move(t));
  return out;
}

}  // namespace segtrack
