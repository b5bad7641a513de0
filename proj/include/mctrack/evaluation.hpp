#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mctrack/sequence_io.hpp"

namespace mctrack {

enum class Outcome { TD, FD, MD, TN };

const char* to_string(Outcome outcome);

/// One decision on a frame: a truth box (TD or MD), an unmatched detection
/// (FD), or an empty frame (TN).
struct FrameJudgement {
  int frame_index = 0;
  Outcome outcome = Outcome::TN;
  std::optional<double> centroid_error;  // TD only
};

/// How a frame with several truth boxes counts towards n_td.
enum class FrameRule { AllMatched, AnyMatched };

struct PrecisionPoint {
  int threshold = 0;  // pixels
  double fraction = 0.0;
};

struct EvalReport {
  int frames = 0;
  int n_td = 0;
  int n_fd = 0;
  int n_md = 0;
  double td_pct = 0.0;
  double fd_pct = 0.0;
  double md_pct = 0.0;
  double fps = 0.0;
  std::vector<PrecisionPoint> precision;  // thresholds 0..50
};

inline constexpr int kMaxPrecisionThreshold = 50;

double overlap_area(const Box& a, const Box& b);
double centroid_distance(const Box& a, const Box& b);

/// Matches truth to detections greedily by descending overlap area; a truth
/// box counts as detected when some detection overlaps it.
std::vector<FrameJudgement> judge_frame(int frame_index, const std::vector<Box>& detections,
                                        const std::vector<Box>& truth);

/// Judges frames 1..frame_count. `truth` holds one annotation list per object.
std::vector<FrameJudgement> judge_sequence(const std::vector<DetectionRecord>& detections,
                                           const std::vector<std::vector<GroundTruthBox>>& truth,
                                           int frame_count);

/// TD = 100 n_td / N, FD = 100 n_fd / (n_td + n_fd), MD = 100 n_md / (n_td + n_md),
/// counted per frame. Zero denominators give 0%.
EvalReport aggregate(const std::vector<FrameJudgement>& judgements,
                     FrameRule rule = FrameRule::AllMatched);

/// Frames per second; zero frames give 0.
double measure_fps(long frame_count, double elapsed_seconds);

std::string report_to_json(const EvalReport& report);
void write_report(const std::filesystem::path& path, const EvalReport& report);
void write_precision_csv(const std::filesystem::path& path, const EvalReport& report);

}  // namespace mctrack
