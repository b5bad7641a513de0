#include "mctrack/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mctrack/evaluation.hpp"
#include "mctrack/pipeline.hpp"
#include "mctrack/synthetic.hpp"

namespace mctrack {
namespace fs = std::filesystem;
namespace {

struct Overrides {
  std::optional<int> eta;
  std::optional<double> alpha;
  std::optional<double> phi;
  std::optional<int> min_blob_area;
  std::optional<int> invisible_max;
  std::optional<std::string> input;
  std::optional<std::string> pattern;
  std::vector<std::string> gt;
  std::optional<std::string> out;
  std::string config_file;
  bool dump_bg = false;
  bool dump_fg = false;
  bool dump_blobs = false;
  bool dump_tracks = false;
  bool no_annotate = false;
};

void add_pipeline_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--input", o.input, "Directory holding the frames");
  cmd->add_option("--pattern", o.pattern, "Filename glob selecting frames (default *)");
  cmd->add_option("--eta", o.eta, "History length (default 4)");
  cmd->add_option("--alpha", o.alpha, "Search-region and dilation scale (default 1.5)");
  cmd->add_option("--phi", o.phi, "Cost of infeasible track/object pairs (default 1e6)");
  cmd->add_option("--min-blob-area", o.min_blob_area, "Smallest blob kept, in pixels (default 9)");
  cmd->add_option("--invisible-max", o.invisible_max, "Frames a track may stay unseen (default 2*eta)");
  cmd->add_option("--config", o.config_file, "JSON config; command-line flags take precedence");
}

PipelineConfig resolve_config(const Overrides& o) {
  PipelineConfig c;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw IoError("cannot open config " + o.config_file);
    std::stringstream ss;
    ss << in.rdbuf();
    c.merge_json(ss.str());
  }
  if (o.eta) c.eta = *o.eta;
  if (o.alpha) c.alpha = *o.alpha;
  if (o.phi) c.phi = *o.phi;
  if (o.min_blob_area) c.min_blob_area = *o.min_blob_area;
  if (o.invisible_max) c.invisible_max = *o.invisible_max;
  if (o.input) c.input_dir = *o.input;
  if (o.pattern) c.pattern = *o.pattern;
  if (!o.gt.empty()) c.ground_truth.assign(o.gt.begin(), o.gt.end());
  if (o.out) c.output_dir = *o.out;
  c.dump_background = c.dump_background || o.dump_bg;
  c.dump_foreground = c.dump_foreground || o.dump_fg;
  c.dump_blobs = c.dump_blobs || o.dump_blobs;
  c.dump_tracks = c.dump_tracks || o.dump_tracks;
  if (o.no_annotate) c.annotate = false;
  c.validate();
  if (c.input_dir.empty()) throw ConfigError("--input is required");
  return c;
}

std::string numbered(const char* stem, int index, const char* ext) {
  char name[64];
  std::snprintf(name, sizeof(name), "%s_%04d.%s", stem, index, ext);
  return name;
}

GrayImage scaled(const WeightImage& w, int eta) {
  GrayImage out(w.width(), w.height());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = 255.0 * w[i] / std::max(eta - 1, 1);
  return out;
}

GrayImage mask_image(const Mask& m) {
  GrayImage out(m.width(), m.height());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] ? 255.0 : 0.0;
  return out;
}

GrayImage blob_layers(const RefinementTrace& trace, int width, int height) {
  GrayImage out(width, height, 0.0);
  auto paint = [&](const std::vector<Blob>& blobs, double v) {
    for (const Blob& b : blobs)
      for (const Pixel& p : b.pixels()) out.at(p.x, p.y) = v;
  };
  paint(trace.dilated, 85.0);
  paint(trace.original, 170.0);
  paint(trace.refined, 255.0);
  return out;
}

std::vector<std::vector<GroundTruthBox>> load_truths(const std::vector<fs::path>& paths) {
  std::vector<std::vector<GroundTruthBox>> out;
  for (const auto& p : paths) out.push_back(load_ground_truth(p));
  return out;
}

int frame_span(const std::vector<DetectionRecord>& dets,
               const std::vector<std::vector<GroundTruthBox>>& truths, int at_least) {
  int n = at_least;
  for (const auto& d : dets) n = std::max(n, d.frame);
  for (const auto& t : truths) n = std::max(n, static_cast<int>(t.size()));
  return n;
}

struct TrackOutcome {
  std::vector<DetectionRecord> detections;
  long frames = 0;
  double compute_seconds = 0.0;
};

// Runs the pipeline, writing requested artefacts under `out` (if non-empty).
// Only per-frame processing is timed.
TrackOutcome track_sequence(const PipelineConfig& config, const fs::path& out) {
  const std::vector<Frame> frames = load_sequence(config.input_dir, config.pattern);
  if (static_cast<int>(frames.size()) <= config.eta)
    throw InsufficientFramesError("sequence has " + std::to_string(frames.size()) +
                                  " frames; more than eta=" + std::to_string(config.eta) +
                                  " are needed");
  const bool writing = !out.empty();
  if (writing) {
    fs::create_directories(out);
    if (config.annotate) fs::create_directories(out / "annotated");
    if (config.dump_background || config.dump_foreground || config.dump_blobs)
      fs::create_directories(out / "debug");
  }
  std::ofstream track_dump;
  if (writing && config.dump_tracks) {
    track_dump.open(out / "tracks.csv");
    if (!track_dump) throw IoError("cannot write " + (out / "tracks.csv").string());
    track_dump << "frame,id,row,col,v_row,v_col,invisible\n";
  }

  Pipeline pipeline(config);
  TrackOutcome outcome;
  for (const Frame& f : frames) {
    const auto start = std::chrono::steady_clock::now();
    FrameResult r;
    try {
      r = pipeline.process(f);
    } catch (const Error& e) {
      throw Error("frame " + std::to_string(f.index) + ": " + e.what());
    }
    outcome.compute_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ++outcome.frames;
    const auto records = visible_records(r);
    outcome.detections.insert(outcome.detections.end(), records.begin(), records.end());
    if (!writing) continue;

    if (config.annotate)
      write_png(out / "annotated" / numbered("frame", f.index, "png"),
                r.operated ? annotate_frame(f.pixels, r.tracks) : f.pixels);
    const fs::path debug = out / "debug";
    if (r.background) {
      write_pgm(debug / numbered("background", f.index, "pgm"), r.background->background);
      write_pgm(debug / numbered("dissimilarity", f.index, "pgm"), r.background->dissimilarity);
      write_pgm(debug / numbered("weight", f.index, "pgm"), scaled(r.background->weight, config.eta));
    }
    if (r.foreground) write_pgm(debug / numbered("foreground", f.index, "pgm"), *r.foreground);
    if (r.mask) write_pgm(debug / numbered("mask", f.index, "pgm"), mask_image(*r.mask));
    if (r.refinement)
      write_pgm(debug / numbered("blobs", f.index, "pgm"),
                blob_layers(*r.refinement, f.width(), f.height()));
    if (track_dump.is_open()) {
      for (const Track& t : r.tracks) {
        const auto& s = t.kalman.state;
        track_dump << f.index << ',' << t.id << ',' << s(0) << ',' << s(1) << ',' << s(2) << ','
                   << s(3) << ',' << t.invisible_count << '\n';
      }
    }
  }
  if (writing) write_detections(out / "detections.csv", outcome.detections);
  return outcome;
}

EvalReport evaluate(const std::vector<DetectionRecord>& detections,
                    const std::vector<fs::path>& gt, int frames, FrameRule rule) {
  const auto truths = load_truths(gt);
  return aggregate(judge_sequence(detections, truths, frame_span(detections, truths, frames)), rule);
}

void print_summary(const EvalReport& r) {
  std::cout << "frames " << r.frames << "  TD " << r.td_pct << "%  FD " << r.fd_pct << "%  MD "
            << r.md_pct << "%  FPS " << r.fps << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Moving-object detection and tracking for moving-camera image sequences"};
  app.require_subcommand(1);

  Overrides track_opts;
  auto* track = app.add_subcommand("track", "Detect and track objects in an image sequence");
  add_pipeline_options(track, track_opts);
  track->add_option("--out", track_opts.out, "Output directory")->required();
  track->add_option("--gt", track_opts.gt, "Ground-truth file(s); enables evaluation");
  track->add_flag("--dump-bg", track_opts.dump_bg, "Write background, dissimilarity and weight images");
  track->add_flag("--dump-fg", track_opts.dump_fg, "Write foreground difference and mask images");
  track->add_flag("--dump-blobs", track_opts.dump_blobs, "Write original, dilated and refined blobs");
  track->add_flag("--dump-tracks", track_opts.dump_tracks, "Write per-frame track states as CSV");
  track->add_flag("--no-annotate", track_opts.no_annotate, "Skip annotated PNG output");

  std::string eval_detections, eval_report, eval_precision, eval_rule = "all";
  std::vector<std::string> eval_gt;
  int eval_frames = 0;
  auto* eval = app.add_subcommand("eval", "Score a detections CSV against ground truth");
  eval->add_option("--detections", eval_detections, "Detections CSV")->required();
  eval->add_option("--gt", eval_gt, "Ground-truth file(s)")->required();
  eval->add_option("--report", eval_report, "Output JSON report")->required();
  eval->add_option("--precision", eval_precision, "Optional precision-curve CSV");
  eval->add_option("--frames", eval_frames, "Sequence length, if longer than the annotations");
  eval->add_option("--rule", eval_rule, "Multi-object frame rule: all or any")
      ->check(CLI::IsMember({"all", "any"}));

  std::string synth_spec, synth_out;
  auto* synth = app.add_subcommand("synth", "Render a synthetic scene");
  synth->add_option("--spec", synth_spec, "Scene JSON")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();

  Overrides bench_opts;
  std::string bench_report;
  auto* bench = app.add_subcommand("benchmark", "Track, evaluate and measure throughput");
  add_pipeline_options(bench, bench_opts);
  bench->add_option("--gt", bench_opts.gt, "Ground-truth file(s)")->required();
  bench->add_option("--report", bench_report, "Output JSON report")->required();
  bench->add_option("--out", bench_opts.out, "Optional directory for detections and artefacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*track) {
      const PipelineConfig config = resolve_config(track_opts);
      const TrackOutcome outcome = track_sequence(config, config.output_dir);
      std::cout << "tracked " << outcome.frames << " frames, "
                << outcome.detections.size() << " track boxes\n";
      if (!config.ground_truth.empty()) {
        EvalReport r = evaluate(outcome.detections, config.ground_truth,
                                static_cast<int>(outcome.frames), FrameRule::AllMatched);
        r.fps = measure_fps(outcome.frames, outcome.compute_seconds);
        write_report(config.output_dir / "report.json", r);
        write_precision_csv(config.output_dir / "precision.csv", r);
        print_summary(r);
      }
    } else if (*eval) {
      std::vector<fs::path> gt(eval_gt.begin(), eval_gt.end());
      const EvalReport r = evaluate(read_detections(eval_detections), gt, eval_frames,
                                    eval_rule == "any" ? FrameRule::AnyMatched : FrameRule::AllMatched);
      write_report(eval_report, r);
      if (!eval_precision.empty()) write_precision_csv(eval_precision, r);
      print_summary(r);
    } else if (*synth) {
      const SyntheticSequence seq = render(load_scene(synth_spec));
      write_sequence(synth_out, seq);
      std::cout << "wrote " << seq.frames.size() << " frames and " << seq.truth.size()
                << " truth files to " << synth_out << '\n';
    } else if (*bench) {
      PipelineConfig config = resolve_config(bench_opts);
      config.annotate = config.annotate && !config.output_dir.empty();
      const TrackOutcome outcome = track_sequence(config, config.output_dir);
      EvalReport r = evaluate(outcome.detections, config.ground_truth,
                              static_cast<int>(outcome.frames), FrameRule::AllMatched);
      r.fps = measure_fps(outcome.frames, outcome.compute_seconds);
      write_report(bench_report, r);
      print_summary(r);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SpecValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InsufficientFramesError& e) {
    std::cerr << "insufficient frames: " << e.what() << '\n';
    return kExitInsufficientFrames;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ParseError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const EmptySequenceError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace mctrack
