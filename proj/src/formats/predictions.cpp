#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "formats/json_codec.hpp"
#include "segtrack/error.hpp"
#include "segtrack/formats.hpp"

namespace segtrack {

namespace {

using nlohmann::json;

DetectionRecord parse_record(const std::string& line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no);
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParseError, where + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kSchemaError, where + ": record must be an object");

  auto field = [&](const char* key) -> const json& {
    const auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorKind::kSchemaError, where + ": missing '" + key + "'");
    return *it;
  };

  DetectionRecord rec;
  const json& frame = field("frame");
  if (!frame.is_number_integer() || frame.get<std::int64_t>() < 0) {
    throw Error(ErrorKind::kSchemaError, where + ": frame must be an integer >= 0");
  }
  rec.frame = frame.get<std::int64_t>();

  const json& label = field("label");
  if (!label.is_string() || label.get<std::string>().empty()) {
    throw Error(ErrorKind::kSchemaError, where + ": label must be a nonempty string");
  }
  rec.label = label.get<std::string>();

  const json& score = field("score");
  if (!score.is_number()) throw Error(ErrorKind::kSchemaError, where + ": score must be a number");
  rec.score = score.get<double>();
  if (!(rec.score >= 0.0 && rec.score <= 1.0)) {
    throw Error(ErrorKind::kRange, where + ": score " + score.dump() + " outside [0,1]");
  }

  rec.bbox = detail::bbox_from_json(field("bbox"), where);
  rec.segmentation = detail::segmentation_from_json(field("segmentation"), where);
  return rec;
}

}  // namespace

std::vector<DetectionRecord> parse_predictions(std::istream& in) {
  std::vector<DetectionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_record(line, line_no));
    } catch (const Error& e) {
      // Codec errors raised below parse_record lack the line number.
      const std::string& msg = e.message();
      if (msg.rfind("line " + std::to_string(line_no) + ":", 0) == 0) throw;
      throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + msg);
    }
  }
  return out;
}

std::vector<DetectionRecord> parse_predictions(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_predictions(in);
}

std::string prediction_line(const DetectionRecord& det) {
  detail::ordered_json j = detail::ordered_json::object();
  j["frame"] = det.frame;
  j["label"] = det.label;
  j["score"] = det.score;
  j["bbox"] = detail::bbox_to_json(det.bbox);
  j["segmentation"] = detail::segmentation_to_json(det.segmentation);
  return j.dump();
}

void write_predictions(std::ostream& out, const std::vector<DetectionRecord>& dets) {
  for (const DetectionRecord& d : dets) out << prediction_line(d) << '\n';
}

}  // namespace segtrack
