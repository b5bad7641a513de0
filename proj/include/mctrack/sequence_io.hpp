#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mctrack/image.hpp"

namespace mctrack {

/// One annotated box; coordinates are 1-based with a top-left origin.
/// An all-zero line ("0,0,0,0") marks a frame where the object is absent.
struct GroundTruthBox {
  int frame_index = 0;
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;
  bool present = true;

  Box box() const { return {x, y, w, h}; }
  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

/// A reported track box on one frame (1-based coordinates, like ground truth).
struct DetectionRecord {
  int frame = 0;
  int id = 0;
  Box box;

  friend bool operator==(const DetectionRecord&, const DetectionRecord&) = default;
};

/// ITU-R BT.601 luma, rounded half-up.
double luminance(double r, double g, double b);

/// Reads a PGM (P2/P5), PPM (P3/P6) or 8-bit PNG into a gray image.
GrayImage read_image(const std::filesystem::path& path);

void write_pgm(const std::filesystem::path& path, const GrayImage& image);
void write_png(const std::filesystem::path& path, const GrayImage& image);

/// Loads every file in `dir` whose name matches the glob `pattern`, in
/// lexicographic order, as frames 1..T.
std::vector<Frame> load_sequence(const std::filesystem::path& dir,
                                 const std::string& pattern = "*");

/// One "x,y,w,h" line per frame (comma or tab separated); line k is frame k.
std::vector<GroundTruthBox> load_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const std::filesystem::path& path,
                        const std::vector<GroundTruthBox>& boxes);

/// Writes "frame,id,x,y,w,h" rows ordered by (frame, id).
void write_detections(const std::filesystem::path& path,
                      std::vector<DetectionRecord> records);
std::vector<DetectionRecord> read_detections(const std::filesystem::path& path);

}  // namespace mctrack
