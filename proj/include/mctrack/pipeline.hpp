#pragma once

#include <deque>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mctrack/background_model.hpp"
#include "mctrack/blob_refinement.hpp"
#include "mctrack/motion_compensation.hpp"
#include "mctrack/sequence_io.hpp"
#include "mctrack/tracker.hpp"

namespace mctrack {

struct PipelineConfig {
  int eta = 4;
  double alpha = 1.5;
  double phi = 1e6;
  int min_blob_area = 9;
  int min_object_side = 2;
  std::optional<int> invisible_max;  // defaults to 2 * eta

  std::filesystem::path input_dir;
  std::string pattern = "*";
  std::vector<std::filesystem::path> ground_truth;
  std::filesystem::path output_dir;

  bool annotate = true;
  bool dump_background = false;
  bool dump_foreground = false;
  bool dump_blobs = false;
  bool dump_tracks = false;

  int effective_invisible_max() const { return invisible_max.value_or(2 * eta); }

  /// Throws ConfigError unless eta >= 2, alpha > 1, phi > 255 and the
  /// invisibility limit is at least 1.
  void validate() const;

  /// Overlays the keys present in a JSON object onto this config.
  void merge_json(const std::string& text);
};

/// Everything computed for one frame.
struct FrameResult {
  int frame_index = 0;
  bool operated = false;  // false while the history is still filling
  std::vector<DetectedObject> detections;
  std::vector<Track> tracks;  // tracker state after this frame
  Association association;

  // Filled only when the matching debug toggle is set.
  std::optional<ActingBackground> background;
  std::optional<GrayImage> foreground;
  std::optional<Mask> mask;
  std::optional<RefinementTrace> refinement;
};

/// Streaming detector and tracker. Feed frames in order.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  FrameResult process(const Frame& frame);

  const Tracker& tracker() const noexcept { return tracker_; }
  const PipelineConfig& config() const noexcept { return config_; }

 private:
  PipelineConfig config_;
  Tracker tracker_;
  std::deque<Frame> history_;  // most recent first
  std::deque<Spectrum> history_spectra_;
  bool initialised_ = false;
};

/// Track boxes reported for a frame: tracks associated on it, 1-based.
std::vector<DetectionRecord> visible_records(const FrameResult& result);

struct PipelineRun {
  std::vector<DetectionRecord> detections;
  std::vector<FrameResult> frames;
  double compute_seconds = 0.0;
};

/// Runs the detector over a whole sequence. Throws InsufficientFramesError
/// when there are not more frames than eta.
PipelineRun run_pipeline(const std::vector<Frame>& frames, const PipelineConfig& config,
                         bool keep_frame_results = false);

/// Draws a 1-px rectangle and id label per live track; coasting tracks are dashed.
GrayImage annotate_frame(const GrayImage& frame, const std::vector<Track>& tracks);

}  // namespace mctrack
