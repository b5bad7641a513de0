#include "mctrack/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>

#include "mctrack/foreground.hpp"

namespace mctrack {

void PipelineConfig::validate() const {
  if (eta < 2) throw ConfigError("eta must be at least 2");
  if (!(alpha > 1.0)) throw ConfigError("alpha must be greater than 1");
  if (!(phi > 255.0)) throw ConfigError("phi must exceed the largest possible cost (255)");
  if (effective_invisible_max() < 1) throw ConfigError("invisible_max must be at least 1");
  if (min_blob_area < 1) throw ConfigError("min_blob_area must be at least 1");
  if (min_object_side < 1) throw ConfigError("min_object_side must be at least 1");
}

void PipelineConfig::merge_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    eta = j.value("eta", eta);
    alpha = j.value("alpha", alpha);
    phi = j.value("phi", phi);
    min_blob_area = j.value("min_blob_area", min_blob_area);
    min_object_side = j.value("min_object_side", min_object_side);
    if (j.contains("invisible_max")) invisible_max = j["invisible_max"].get<int>();
    if (j.contains("input")) input_dir = j["input"].get<std::string>();
    pattern = j.value("pattern", pattern);
    if (j.contains("gt")) {
      ground_truth.clear();
      if (j["gt"].is_array())
        for (const auto& p : j["gt"]) ground_truth.emplace_back(p.get<std::string>());
      else
        ground_truth.emplace_back(j["gt"].get<std::string>());
    }
    if (j.contains("out")) output_dir = j["out"].get<std::string>();
    annotate = j.value("annotate", annotate);
    dump_background = j.value("dump_bg", dump_background);
    dump_foreground = j.value("dump_fg", dump_foreground);
    dump_blobs = j.value("dump_blobs", dump_blobs);
    dump_tracks = j.value("dump_tracks", dump_tracks);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
}

Pipeline::Pipeline(PipelineConfig config)
    : config_(std::move(config)),
      tracker_(TrackerParams{config_.alpha, config_.phi, config_.effective_invisible_max(), {}}) {
  config_.validate();
}

FrameResult Pipeline::process(const Frame& frame) {
  if (!history_.empty()) require_same_shape(frame.pixels, history_.front().pixels, "pipeline");
  FrameResult result;
  result.frame_index = frame.index;
  Spectrum spectrum = forward_transform(frame);

  if (static_cast<int>(history_.size()) == config_.eta) {
    result.operated = true;
    std::vector<const Spectrum*> predecessors;
    for (const auto& s : history_spectra_) predecessors.push_back(&s);
    const HistoryWindow window = align_history(spectrum, predecessors);
    const ActingBackground bg = build_background(window);
    const GrayImage difference = difference_foreground(frame.pixels, bg);
    const Mask mask = classify_moving(difference, bg.weight, bg.dissimilarity,
                                      LevelBands::for_eta(config_.eta));

    RefinementTrace trace;
    result.detections = refine_objects(
        mask, frame.pixels, {config_.alpha, config_.min_blob_area, config_.min_object_side},
        config_.dump_blobs ? &trace : nullptr);

    if (!initialised_) {
      tracker_.initialize_tracks(result.detections);
      for (int l = 0; l < static_cast<int>(result.detections.size()); ++l)
        result.association.new_detections.push_back(l);
      initialised_ = true;
    } else {
      result.association = tracker_.step(result.detections);
    }
    result.tracks = tracker_.tracks();

    if (config_.dump_background) result.background = bg;
    if (config_.dump_foreground) {
      result.foreground = difference;
      result.mask = mask;
    }
    if (config_.dump_blobs) result.refinement = std::move(trace);
  }

  history_.push_front(frame);
  history_spectra_.push_front(std::move(spectrum));
  if (static_cast<int>(history_.size()) > config_.eta) {
    history_.pop_back();
    history_spectra_.pop_back();
  }
  return result;
}

std::vector<DetectionRecord> visible_records(const FrameResult& result) {
  std::vector<DetectionRecord> out;
  for (const Track& t : result.tracks) {
    if (!t.visible) continue;
    Box b = t.box();
    b.x += 1;
    b.y += 1;
    out.push_back({result.frame_index, t.id, b});
  }
  return out;
}

PipelineRun run_pipeline(const std::vector<Frame>& frames, const PipelineConfig& config,
                         bool keep_frame_results) {
  config.validate();
  if (static_cast<int>(frames.size()) <= config.eta)
    throw InsufficientFramesError("sequence has " + std::to_string(frames.size()) +
                                  " frames; more than eta=" + std::to_string(config.eta) +
                                  " are needed");
  Pipeline pipeline(config);
  PipelineRun run;
  const auto start = std::chrono::steady_clock::now();
  for (const Frame& f : frames) {
    FrameResult r;
    try {
      r = pipeline.process(f);
    } catch (const Error& e) {
      throw Error("frame " + std::to_string(f.index) + ": " + e.what());
    }
    auto records = visible_records(r);
    run.detections.insert(run.detections.end(), records.begin(), records.end());
    if (keep_frame_results) run.frames.push_back(std::move(r));
  }
  run.compute_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

namespace {

// 3x5 digit glyphs, one row per entry, bit 2 is the leftmost column.
constexpr std::uint8_t kDigits[10][5] = {
    {7, 5, 5, 5, 7}, {2, 6, 2, 2, 7}, {7, 1, 7, 4, 7}, {7, 1, 7, 1, 7}, {5, 5, 7, 1, 1},
    {7, 4, 7, 1, 7}, {7, 4, 7, 5, 7}, {7, 1, 1, 1, 1}, {7, 5, 7, 5, 7}, {7, 5, 7, 1, 7},
};

void put(GrayImage& img, int x, int y, double v) {
  if (img.contains(x, y)) img.at(x, y) = v;
}

void draw_rect(GrayImage& img, const Box& b, bool dashed, double v) {
  auto on = [&](int i) { return !dashed || (i / 2) % 2 == 0; };
  for (int i = 0; i < b.w; ++i) {
    if (!on(i)) continue;
    put(img, b.x + i, b.y, v);
    put(img, b.x + i, b.y + b.h - 1, v);
  }
  for (int i = 0; i < b.h; ++i) {
    if (!on(i)) continue;
    put(img, b.x, b.y + i, v);
    put(img, b.x + b.w - 1, b.y + i, v);
  }
}

void draw_label(GrayImage& img, int x, int y, int id, double v) {
  const std::string text = std::to_string(id);
  for (char ch : text) {
    const auto& glyph = kDigits[ch - '0'];
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 3; ++c)
        if (glyph[r] & (4 >> c)) put(img, x + c, y + r, v);
    x += 4;
  }
}

}  // namespace

GrayImage annotate_frame(const GrayImage& frame, const std::vector<Track>& tracks) {
  GrayImage out = frame;
  for (const Track& t : tracks) {
    const Box b = t.box();
    // Bright strokes on dark surroundings, dark on bright.
    const double v = frame.contains(b.x, b.y) && frame.at(b.x, b.y) > 127 ? 0.0 : 255.0;
    draw_rect(out, b, t.invisible_count > 0, v);
    draw_label(out, b.x + 2, b.y + 2, t.id, v);
  }
  return out;
}

}  // namespace mctrack
