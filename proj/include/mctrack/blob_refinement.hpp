#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "mctrack/image.hpp"

namespace mctrack {

struct Pixel {
  int x = 0;  // column
  int y = 0;  // row

  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel& a, const Pixel& b) {
    return a.y != b.y ? a.y <=> b.y : a.x <=> b.x;
  }
};

/// A set of pixels with its tight bounding box and centroid. Pixels are kept
/// sorted in raster order and unique.
class Blob {
 public:
  Blob() = default;
  explicit Blob(std::vector<Pixel> pixels);

  const std::vector<Pixel>& pixels() const& noexcept { return pixels_; }
  std::vector<Pixel> pixels() && noexcept { return std::move(pixels_); }
  std::size_t area() const noexcept { return pixels_.size(); }
  bool empty() const noexcept { return pixels_.empty(); }
  const Box& box() const noexcept { return box_; }
  double centroid_row() const noexcept { return centroid_row_; }
  double centroid_col() const noexcept { return centroid_col_; }
  bool contains(Pixel p) const;

  /// True when every pixel of this blob is in `other`.
  bool subset_of(const Blob& other) const;

  friend bool operator==(const Blob& a, const Blob& b) { return a.pixels_ == b.pixels_; }

 private:
  std::vector<Pixel> pixels_;
  Box box_;
  double centroid_row_ = 0.0;
  double centroid_col_ = 0.0;
};

/// Feature vector of a refined object.
struct DetectedObject {
  double row = 0.0;  // centroid
  double col = 0.0;
  int height = 0;
  int width = 0;
  std::array<int, 3> peaks{};  // most frequent gray levels, by descending count
  Box box;                     // 0-based bounding box
};

struct RefinementParams {
  double alpha = 1.5;
  int min_blob_area = 9;
  int min_object_side = 2;
};

/// 8-connected components of the mask; components below `min_area` pixels
/// are dropped.
std::vector<Blob> connected_components(const Mask& mask, int min_area);

/// Smallest Euclidean distance from the centroid to a boundary pixel (a blob
/// pixel with a non-blob 8-neighbour).
double centroid_boundary_distance(const Blob& blob);

/// Grows the blob inside its bounding box scaled by `alpha` about the centre.
/// A candidate joins when its row- or column-wise gap to the nearest blob
/// pixel is at most half the centroid-to-boundary distance (at least 1).
Blob dilate_blob(const Blob& blob, double alpha, int frame_width, int frame_height);

/// Population standard deviation of the frame over the blob's pixels.
double intensity_stddev(const Blob& blob, const GrayImage& frame);

/// Pixels of `dilated` whose 8-neighbourhood spans at least `threshold` gray levels.
std::vector<Pixel> detect_edges(const Blob& dilated, const GrayImage& frame, double threshold);

/// Edge detection with the threshold taken from the original blob's spread.
inline std::vector<Pixel> detect_edges(const Blob& original, const Blob& dilated,
                                       const GrayImage& frame) {
  return detect_edges(dilated, frame, intensity_stddev(original, frame));
}

/// Removes pixels outside the first/last edge of each row and of each column,
/// and intersects the two results. Empty output means a spurious blob.
std::optional<Blob> trim_and_intersect(const Blob& dilated, const std::vector<Pixel>& edges);

DetectedObject extract_features(const Blob& blob, const GrayImage& frame);

/// Top three gray levels of the rounded histogram, padded with the dominant one.
std::array<int, 3> histogram_peaks(const Blob& blob, const GrayImage& frame);

/// Intermediate regions kept for debug rendering.
struct RefinementTrace {
  std::vector<Blob> original;
  std::vector<Blob> dilated;
  std::vector<Blob> refined;
};

/// The full chain: components, dilation (touching dilated blobs merge), edge
/// trimming and feature extraction.
std::vector<DetectedObject> refine_objects(const Mask& mask, const GrayImage& frame,
                                           const RefinementParams& params,
                                           RefinementTrace* trace = nullptr);

}  // namespace mctrack
