#include <array>
#include <cstdint>
#include <cstdio>
#include <string>

#include "segtrack/analytics.hpp"
#include "segtrack/error.hpp"

namespace segtrack {

namespace {

constexpr std::array<const char*, 12> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
};

// FNV-1a; std::hash is not stable across implementations.
std::uint32_t fnv1a(const std::string& s) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : s) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

const char* color_for(const std::string& label) { return kPalette[fnv1a(label) % kPalette.size()]; }

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string plot_trajectories(const std::vector<Track>& tracks, int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "plot dimensions must be > 0");
  }
  const std::string w = std::to_string(width);
  const std::string h = std::to_string(height);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w +
         "\" height=\"" + h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
  svg += "  <rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h +
         "\" fill=\"#ffffff\" stroke=\"#000000\"/>\n";

  for (const Track& t : tracks) {
    const char* color = color_for(t.label);
    std::string points;
    std::size_t n = 0;
    Point2D only;
    for (const TrackState& s : t.states) {
      if (!s.present) continue;
      if (n++) points += ' ';
      points += num(s.centroid.x) + "," + num(s.centroid.y);
      only = s.centroid;
    }
    if (n == 1) {
      svg += "  <circle class=\"track\" data-label=\"" + escape_xml(t.label) + "\" cx=\"" +
             num(only.x) + "\" cy=\"" + num(only.y) + "\" r=\"2\" fill=\"" + color + "\"/>\n";
    } else if (n > 1) {
      svg += "  <polyline class=\"track\" data-label=\"" + escape_xml(t.label) +
             "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\" points=\"" + points +
             "\"/>\n";
    }
  }

  svg += "  <g class=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg += "    <text x=\"6\" y=\"14\">tracks</text>\n";
  int y = 28;
  for (const Track& t : tracks) {
    svg += "    <g class=\"legend-entry\"><rect x=\"6\" y=\"" + std::to_string(y - 8) +
           "\" width=\"10\" height=\"10\" fill=\"" + color_for(t.label) + "\"/><text x=\"20\" y=\"" +
           std::to_string(y) + "\">" + escape_xml(t.label) + "</text></g>\n";
    y += 14;
  }
  svg += "  </g>\n</svg>\n";
  return svg;
}

}  // namespace segtrack
