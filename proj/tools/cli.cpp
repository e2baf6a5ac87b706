#include "cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "segtrack/analytics.hpp"
#include "segtrack/error.hpp"
#include "segtrack/formats.hpp"
#include "segtrack/metrics.hpp"
#include "segtrack/synth.hpp"
#include "segtrack/tracking.hpp"

namespace segtrack::cli {

namespace {

namespace fs = std::filesystem;

// Invocation problems detected after flag parsing; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs fn, prefixing any domain error with the file it concerns.
template <typename F>
auto with_file(const std::string& path, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.message());
  }
}

// Destination for one artifact: a file, or `out` when the path is empty
// or "-".
class Sink {
 public:
  Sink(std::string path, std::ostream& out) : path_(std::move(path)), out_(out) {}

  bool to_stream() const { return path_.empty() || path_ == "-"; }

  void check(bool force) const {
    if (!to_stream() && !force && fs::exists(path_)) {
      throw Error(ErrorKind::kConflict, path_ + ": exists; pass --force to overwrite");
    }
  }

  void write(const std::string& content) const {
    if (to_stream()) {
      out_ << content;
      out_.flush();
      return;
    }
    std::ofstream f(path_, std::ios::binary | std::ios::trunc);
    if (!f || !(f << content) || !f.flush()) {
      throw Error(ErrorKind::kIo, path_ + ": cannot write");
    }
  }

 private:
  std::string path_;
  std::ostream& out_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

ReportFormat report_format(const std::string& s) {
  return s == "json" ? ReportFormat::kJson : ReportFormat::kCsv;
}

std::vector<DetectionRecord> load_predictions(const std::string& path) {
  const std::string text = read_file(path);
  return with_file(path, [&] { return parse_predictions(std::string_view(text)); });
}

CocoDataset load_coco(const std::string& path) {
  const std::string text = read_file(path);
  return with_file(path, [&] { return read_coco(text); });
}

std::vector<Track> tracks_from_predictions(const std::string& path, double score_threshold) {
  auto dets = resolve_all_duplicates(filter_by_score(load_predictions(path), score_threshold));
  return with_file(path, [&] { return assemble_tracks(dets); });
}

std::vector<Track> load_tracks_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, path + ": cannot open for reading");
  return with_file(path, [&] { return read_tracks_csv(in); });
}

// Track input shared by the analyze commands: a tracks CSV or raw
// predictions.
struct TrackInput {
  std::string tracks_csv;
  std::string pred;
  double score_threshold = kDefaultScoreThreshold;

  void add_to(CLI::App* cmd) {
    auto* t = cmd->add_option("--tracks", tracks_csv, "tracks CSV written by `track`")
                  ->check(CLI::ExistingFile);
    auto* p = cmd->add_option("--pred", pred, "prediction JSON-Lines")->check(CLI::ExistingFile);
    t->excludes(p);
    cmd->add_option("--score-threshold", score_threshold, "minimum score kept from --pred")
        ->capture_default_str();
  }

  std::vector<Track> load() const {
    if (!tracks_csv.empty()) return load_tracks_csv(tracks_csv);
    if (!pred.empty()) return tracks_from_predictions(pred, score_threshold);
    throw UsageError("one of --tracks or --pred is required");
  }
};

std::vector<ZoneDefinition> load_zones(const std::string& path) {
  const std::string text = read_file(path);
  return with_file(path, [&] {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorKind::kParseError, e.what());
    }
    if (!j.is_object() || !j.contains("zones") || !j["zones"].is_array()) {
      throw Error(ErrorKind::kSchemaError, "expected {\"zones\": [...]}");
    }
    std::vector<ZoneDefinition> zones;
    for (std::size_t i = 0; i < j["zones"].size(); ++i) {
      const auto& z = j["zones"][i];
      const std::string where = "zones[" + std::to_string(i) + "]";
      if (!z.is_object() || !z.contains("name") || !z["name"].is_string() ||
          !z.contains("points") || !z["points"].is_array()) {
        throw Error(ErrorKind::kSchemaError, where + " needs a name and points");
      }
      ZoneDefinition zone;
      zone.name = z["name"].get<std::string>();
      for (const auto& pt : z["points"]) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number()) {
          throw Error(ErrorKind::kSchemaError, where + ": points must be [x, y] pairs");
        }
        zone.region.vertices.push_back({pt[0].get<double>(), pt[1].get<double>()});
      }
      try {
        validate_polygon(zone.region);
      } catch (const Error& e) {
        throw Error(e.kind(), where + ": " + e.message());
      }
      zones.push_back(std::move(zone));
    }
    return zones;
  });
}

bool colors_enabled(const std::ostream& err) {
  const char* env = std::getenv("SEGTRACK_COLORS");
  if (env != nullptr && std::string(env) == "off") return false;
  return &err == &std::cerr && isatty(STDERR_FILENO) != 0;
}

void diagnose(std::ostream& err, const std::string& message) {
  if (colors_enabled(err)) {
    err << "segtrack: \x1b[1;31merror\x1b[0m: " << message << "\n";
  } else {
    err << "segtrack: error: " << message << "\n";
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-animal segmentation tracking and measurement toolkit", "segtrack"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  bool force = false;
  app.add_flag("--force", force, "overwrite existing output files");

  // convert
  auto* convert = app.add_subcommand("convert", "labelme documents to one COCO dataset");
  std::string labelme_dir, convert_out;
  double keypoint_radius = kDefaultKeypointRadius;
  convert->add_option("--labelme-dir", labelme_dir, "directory of labelme .json files")
      ->required()
      ->check(CLI::ExistingDirectory);
  convert->add_option("--out", convert_out, "COCO JSON output")->required();
  convert->add_option("--keypoint-radius", keypoint_radius, "radius of point shapes in px")
      ->capture_default_str();

  // split
  auto* split = app.add_subcommand("split", "seeded train/val split of a COCO dataset");
  std::string split_in, train_out, val_out;
  double ratio = kDefaultSplitRatio;
  std::uint64_t split_seed = 0;
  split->add_option("--in", split_in, "COCO JSON input")->required()->check(CLI::ExistingFile);
  split->add_option("--ratio", ratio, "training fraction")->capture_default_str();
  split->add_option("--seed", split_seed, "shuffle seed")->capture_default_str();
  split->add_option("--train-out", train_out, "default: <in>_train.json");
  split->add_option("--val-out", val_out, "default: <in>_val.json");

  // sample
  auto* sample = app.add_subcommand("sample", "pick frames to label");
  std::int64_t n_total = 0, k = 0;
  std::string strategy = "random", sample_out;
  std::uint64_t sample_seed = 0;
  sample->add_option("--n-total", n_total, "number of frames in the video")->required();
  sample->add_option("--k", k, "frames to pick")->required();
  sample->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"random", "uniform"}))
      ->capture_default_str();
  sample->add_option("--seed", sample_seed, "seed for --strategy random")->capture_default_str();
  sample->add_option("--out", sample_out, "frame list output (default stdout)");

  // track
  auto* track = app.add_subcommand("track", "assemble identity tracks from predictions");
  std::string track_pred, track_out;
  double track_threshold = kDefaultScoreThreshold;
  std::int64_t max_gap = 0;
  track->add_option("--pred", track_pred, "prediction JSON-Lines")
      ->required()
      ->check(CLI::ExistingFile);
  track->add_option("--score-threshold", track_threshold)->capture_default_str();
  track->add_option("--max-gap", max_gap, "interpolate absent runs up to this length")
      ->capture_default_str();
  track->add_option("--out", track_out, "tracks CSV output (default stdout)");

  // eval-mot
  auto* eval_mot = app.add_subcommand("eval-mot", "CLEAR-MOT against COCO ground truth");
  std::string mot_gt, mot_pred, mot_video, mot_format = "csv", mot_out, denominator = "gt_objects";
  MotConfig mot_cfg;
  double mot_threshold = kDefaultScoreThreshold;
  eval_mot->add_option("--gt", mot_gt, "COCO JSON, one category per identity")
      ->required()
      ->check(CLI::ExistingFile);
  eval_mot->add_option("--pred", mot_pred, "prediction JSON-Lines")
      ->required()
      ->check(CLI::ExistingFile);
  eval_mot->add_option("--iou", mot_cfg.iou_threshold, "match threshold")->capture_default_str();
  eval_mot->add_option("--denominator", denominator, "N_GT: summed gt objects or frame count")
      ->check(CLI::IsMember({"gt_objects", "frames"}))
      ->capture_default_str();
  eval_mot->add_option("--score-threshold", mot_threshold)->capture_default_str();
  eval_mot->add_option("--video", mot_video, "report row name (default: --pred file stem)");
  eval_mot->add_option("--format", mot_format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  eval_mot->add_option("--out", mot_out, "report output (default stdout)");

  // eval-coco
  auto* eval_coco = app.add_subcommand("eval-coco", "COCO mask AP per category");
  std::string ap_gt, ap_pred, ap_format = "csv", ap_out;
  ApConfig ap_cfg;
  unsigned jobs = 0;
  eval_coco->add_option("--gt", ap_gt, "COCO JSON")->required()->check(CLI::ExistingFile);
  eval_coco->add_option("--pred", ap_pred, "prediction JSON-Lines")
      ->required()
      ->check(CLI::ExistingFile);
  eval_coco->add_option("--max-dets", ap_cfg.max_dets, "detections kept per image and category")
      ->capture_default_str();
  eval_coco->add_option("--jobs", jobs, "worker threads (0: all cores)")->capture_default_str();
  eval_coco->add_option("--format", ap_format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  eval_coco->add_option("--out", ap_out, "report output (default stdout)");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "behavior measurements over tracks");
  analyze->require_subcommand(1, 1);

  auto* stats = analyze->add_subcommand("stats", "distance and speed per track");
  TrackInput stats_in;
  stats_in.add_to(stats);
  double px_per_unit = 1.0;
  std::string stats_format = "csv", stats_out;
  stats->add_option("--px-per-unit", px_per_unit, "calibration scale")->capture_default_str();
  stats->add_option("--format", stats_format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  stats->add_option("--out", stats_out, "output (default stdout)");

  auto* zones_cmd = analyze->add_subcommand("zones", "zone occupancy per track");
  TrackInput zones_in;
  zones_in.add_to(zones_cmd);
  std::string zones_path, zones_out;
  zones_cmd->add_option("--zones", zones_path, "JSON {\"zones\":[{\"name\",\"points\"}]}")
      ->required()
      ->check(CLI::ExistingFile);
  zones_cmd->add_option("--out", zones_out, "output (default stdout)");

  auto* inter = analyze->add_subcommand("interactions", "pairwise interaction runs");
  TrackInput inter_in;
  inter_in.add_to(inter);
  std::string criterion = "mask-iou", inter_out;
  std::optional<double> inter_threshold;
  std::int64_t inter_min = 1;
  inter->add_option("--criterion", criterion)
      ->check(CLI::IsMember({"mask-iou", "centroid-distance"}))
      ->capture_default_str();
  inter->add_option("--threshold", inter_threshold,
                    "IoU floor or distance ceiling (mask-iou default 0.1)");
  inter->add_option("--min-duration", inter_min, "shortest run in frames")->capture_default_str();
  inter->add_option("--out", inter_out, "output (default stdout)");

  auto* bouts = analyze->add_subcommand("bouts", "bouts over per-frame behavior labels");
  std::string labels_path, bouts_out;
  std::int64_t bout_min = 1;
  bouts->add_option("--labels", labels_path, "one behavior label per line, line i = frame i")
      ->required()
      ->check(CLI::ExistingFile);
  bouts->add_option("--min-duration", bout_min, "shortest bout in frames")->capture_default_str();
  bouts->add_option("--out", bouts_out, "output (default stdout)");

  auto* spots = analyze->add_subcommand("spots", "newly appearing stationary spots");
  std::string spots_pred, spots_label, spots_out;
  double spots_min_dist = 0.0, spots_threshold = kDefaultScoreThreshold;
  std::int64_t persistence = 1;
  spots->add_option("--pred", spots_pred, "prediction JSON-Lines")
      ->required()
      ->check(CLI::ExistingFile);
  spots->add_option("--label", spots_label, "spot class label")->required();
  spots->add_option("--min-dist", spots_min_dist, "px radius identifying one spot")->required();
  spots->add_option("--persistence", persistence, "frames before a spot is confirmed")
      ->capture_default_str();
  spots->add_option("--score-threshold", spots_threshold)->capture_default_str();
  spots->add_option("--out", spots_out, "output (default stdout)");

  // synth
  auto* synth = app.add_subcommand("synth", "synthetic scenario with injected errors");
  ScenarioConfig scfg;
  PerturbationConfig pcfg;
  pcfg.seed = 1;
  std::string synth_gt, synth_pred, synth_log;
  synth->add_option("--animals", scfg.n_animals)->capture_default_str();
  synth->add_option("--frames", scfg.n_frames)->capture_default_str();
  synth->add_option("--width", scfg.arena_width)->capture_default_str();
  synth->add_option("--height", scfg.arena_height)->capture_default_str();
  synth->add_option("--radius", scfg.body_radius)->capture_default_str();
  synth->add_option("--speed", scfg.speed_max)->capture_default_str();
  synth->add_option("--min-separation", scfg.min_separation)->capture_default_str();
  synth->add_option("--seed", scfg.seed, "scenario seed")->capture_default_str();
  synth->add_option("--p-fn", pcfg.p_fn)->capture_default_str();
  synth->add_option("--p-fp", pcfg.p_fp)->capture_default_str();
  synth->add_option("--n-ids", pcfg.n_ids)->capture_default_str();
  synth->add_option("--noise", pcfg.centroid_noise, "centroid jitter std in px")
      ->capture_default_str();
  synth->add_option("--perturb-seed", pcfg.seed)->capture_default_str();
  synth->add_option("--gt-out", synth_gt, "COCO JSON ground truth")->required();
  synth->add_option("--pred-out", synth_pred, "perturbed prediction JSON-Lines");
  synth->add_option("--log-out", synth_log, "injection log JSON");

  // plot
  auto* plot = app.add_subcommand("plot", "SVG trajectory plot");
  std::string plot_tracks, plot_out;
  int plot_w = 0, plot_h = 0;
  plot->add_option("--tracks", plot_tracks, "tracks CSV")->required()->check(CLI::ExistingFile);
  plot->add_option("--width", plot_w, "arena width in px")->required();
  plot->add_option("--height", plot_h, "arena height in px")->required();
  plot->add_option("--out", plot_out, "SVG output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    const CLI::App* cur = &app;
    while (!cur->get_subcommands().empty()) cur = cur->get_subcommands().front();
    diagnose(err, e.what());
    err << "\n" << cur->help();
    return kExitUsage;
  }

  try {
    if (convert->parsed()) {
      const Sink sink(convert_out, out);
      sink.check(force);
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(labelme_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
          files.push_back(entry.path());
        }
      }
      std::sort(files.begin(), files.end());
      if (files.empty()) {
        throw Error(ErrorKind::kInvalidArgument, labelme_dir + ": no labelme .json files");
      }
      std::vector<LabelmeDocument> docs;
      for (const fs::path& f : files) {
        const std::string text = read_file(f.string());
        docs.push_back(with_file(f.string(), [&] { return parse_labelme(text); }));
      }
      sink.write(with_file(labelme_dir, [&] { return write_coco(labelme_to_coco(docs, keypoint_radius)); }));
    } else if (split->parsed()) {
      const fs::path in(split_in);
      const auto sibling = [&](const char* suffix) {
        return (in.parent_path() / (in.stem().string() + suffix)).string();
      };
      const Sink train(train_out.empty() ? sibling("_train.json") : train_out, out);
      const Sink val(val_out.empty() ? sibling("_val.json") : val_out, out);
      if (train.to_stream() || val.to_stream()) {
        throw UsageError("split writes two files; --train-out and --val-out must be paths");
      }
      train.check(force);
      val.check(force);
      const CocoDataset ds = load_coco(split_in);
      const SplitResult parts = with_file(split_in, [&] { return split_dataset(ds, ratio, split_seed); });
      train.write(write_coco(parts.train));
      val.write(write_coco(parts.val));
    } else if (sample->parsed()) {
      const Sink sink(sample_out, out);
      sink.check(force);
      const auto strat = strategy == "uniform" ? SamplingStrategy::uniform()
                                               : SamplingStrategy::random(sample_seed);
      std::string text;
      for (std::int64_t f : sample_frames(n_total, k, strat)) text += std::to_string(f) + "\n";
      sink.write(text);
    } else if (track->parsed()) {
      const Sink sink(track_out, out);
      sink.check(force);
      std::vector<Track> tracks = tracks_from_predictions(track_pred, track_threshold);
      if (max_gap > 0) {
        for (Track& t : tracks) t = interpolate_gaps(std::move(t), max_gap);
      }
      std::ostringstream csv;
      write_tracks_csv(csv, tracks);
      sink.write(csv.str());
    } else if (eval_mot->parsed()) {
      const Sink sink(mot_out, out);
      sink.check(force);
      mot_cfg.denominator =
          denominator == "frames" ? MotDenominator::kFrames : MotDenominator::kGtObjects;
      const CocoDataset gt = load_coco(mot_gt);
      const std::vector<Track> gt_tracks = with_file(mot_gt, [&] { return coco_to_tracks(gt); });
      const std::vector<Track> pred_tracks = tracks_from_predictions(mot_pred, mot_threshold);
      MotSummary row{mot_video.empty() ? fs::path(mot_pred).stem().string() : mot_video,
                     evaluate_mot(gt_tracks, pred_tracks, mot_cfg)};
      row.report.per_frame_log.clear();
      sink.write(emit_report(std::vector<MotSummary>{row}, report_format(mot_format)));
    } else if (eval_coco->parsed()) {
      const Sink sink(ap_out, out);
      sink.check(force);
      ap_cfg.jobs = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
      const CocoDataset gt = load_coco(ap_gt);
      const auto dets = load_predictions(ap_pred);
      const ApReport report = with_file(ap_pred, [&] { return evaluate_coco_ap(gt, dets, ap_cfg); });
      sink.write(emit_report(report, report_format(ap_format)));
    } else if (stats->parsed()) {
      const Sink sink(stats_out, out);
      sink.check(force);
      std::vector<TrajectoryStats> rows;
      for (const Track& t : stats_in.load()) rows.push_back(trajectory_stats(t, px_per_unit));
      sink.write(emit_report(rows, report_format(stats_format)));
    } else if (zones_cmd->parsed()) {
      const Sink sink(zones_out, out);
      sink.check(force);
      const auto zones = load_zones(zones_path);
      std::string text = "label,zone,frames,fraction\n";
      for (const Track& t : zones_in.load()) {
        for (const ZoneCount& z : zone_occupancy(t, zones)) {
          text += csv_field(t.label) + "," + csv_field(z.name) + "," + std::to_string(z.frames) +
                  "," + fmt("%.6f", z.fraction) + "\n";
        }
      }
      sink.write(text);
    } else if (inter->parsed()) {
      const Sink sink(inter_out, out);
      sink.check(force);
      const bool by_mask = criterion == "mask-iou";
      if (!by_mask && !inter_threshold) {
        throw UsageError("--criterion centroid-distance requires --threshold");
      }
      if (by_mask && !inter_in.tracks_csv.empty()) {
        throw UsageError("--criterion mask-iou needs masks; use --pred instead of --tracks");
      }
      const double threshold = inter_threshold.value_or(kDefaultHuddleIou);
      const auto tracks = inter_in.load();
      std::string text = "first,second,start_frame,end_frame,criterion\n";
      for (std::size_t i = 0; i < tracks.size(); ++i) {
        for (std::size_t j = i + 1; j < tracks.size(); ++j) {
          const auto events = interaction_events(
              tracks[i], tracks[j],
              by_mask ? InteractionCriterion::kMaskIou : InteractionCriterion::kCentroidDistance,
              threshold, inter_min);
          for (const InteractionEvent& e : events) {
            text += csv_field(e.labels.first) + "," + csv_field(e.labels.second) + "," +
                    std::to_string(e.start_frame) + "," + std::to_string(e.end_frame) + "," +
                    criterion + "\n";
          }
        }
      }
      sink.write(text);
    } else if (bouts->parsed()) {
      const Sink sink(bouts_out, out);
      sink.check(force);
      std::istringstream in(read_file(labels_path));
      std::vector<std::string> labels;
      for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        labels.push_back(line);
      }
      std::string text = "behavior,start_frame,end_frame\n";
      for (const Bout& b : with_file(labels_path, [&] { return segment_bouts(labels, bout_min); })) {
        text += csv_field(b.behavior) + "," + std::to_string(b.start_frame) + "," +
                std::to_string(b.end_frame) + "\n";
      }
      sink.write(text);
    } else if (spots->parsed()) {
      const Sink sink(spots_out, out);
      sink.check(force);
      std::vector<DetectionRecord> dets;
      for (DetectionRecord& d : filter_by_score(load_predictions(spots_pred), spots_threshold)) {
        if (d.label == spots_label) dets.push_back(std::move(d));
      }
      std::string text = "first_frame,x,y,confirmed_frame\n";
      for (const SpotEvent& s : detect_novel_spots(dets, spots_min_dist, persistence)) {
        text += std::to_string(s.first_frame) + "," + fmt("%.3f", s.location.x) + "," +
                fmt("%.3f", s.location.y) + "," + std::to_string(s.confirmed_frame) + "\n";
      }
      sink.write(text);
    } else if (synth->parsed()) {
      const Sink gt_sink(synth_gt, out);
      const Sink pred_sink(synth_pred, out);
      const Sink log_sink(synth_log, out);
      if (gt_sink.to_stream()) throw UsageError("--gt-out must be a path");
      gt_sink.check(force);
      if (!synth_pred.empty()) pred_sink.check(force);
      if (!synth_log.empty()) log_sink.check(force);
      const Scenario sc = generate_scenario(scfg);
      gt_sink.write(write_coco(sc.gt_dataset));
      if (!synth_pred.empty() || !synth_log.empty()) {
        const PerturbedDetections p = perturb(sc, pcfg);
        if (!synth_pred.empty()) {
          std::ostringstream lines;
          write_predictions(lines, p.preds);
          pred_sink.write(lines.str());
        }
        if (!synth_log.empty()) log_sink.write(injection_log_json(p.log));
      }
    } else if (plot->parsed()) {
      const Sink sink(plot_out, out);
      sink.check(force);
      if (plot_w <= 0 || plot_h <= 0) throw UsageError("--width and --height must be positive");
      sink.write(plot_trajectories(load_tracks_csv(plot_tracks), plot_w, plot_h));
    }
  } catch (const UsageError& e) {
    diagnose(err, e.what());
    return kExitUsage;
  } catch (const Error& e) {
    diagnose(err, e.what());
    return kExitFailure;
  } catch (const std::exception& e) {
    diagnose(err, e.what());
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace segtrack::cli
