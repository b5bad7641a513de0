#pragma once

#include "mctrack/image.hpp"
#include "mctrack/motion_compensation.hpp"

namespace mctrack {

inline constexpr int kQuantizationLevels = 10;

/// Background synthesised from the commonality of the history window.
struct ActingBackground {
  int eta = 0;
  GrayImage background;     // mean of the agreeing pairwise intersections, 0 if none
  GrayImage dissimilarity;  // per-pixel history of disagreement, in [0, 255]
  WeightImage weight;       // count of agreeing consecutive pairs, in [0, eta-1]
};

/// Maps intensities in [0, 255] to buckets 1..10: bucket j is the smallest j
/// with h/255 <= j/10. Zero falls into bucket 1.
BucketImage quantize(const GrayImage& image);
std::uint8_t quantize_value(double intensity);

/// Two history frames agree at a pixel when their buckets differ by at most 1.
inline bool buckets_agree(std::uint8_t a, std::uint8_t b) {
  return (a > b ? a - b : b - a) <= 1;
}

/// Mean of the two frames where their buckets agree, 0 elsewhere.
GrayImage intersect_pair(const GrayImage& first, const GrayImage& second,
                         const BucketImage& first_q, const BucketImage& second_q);

/// Builds B, D and W from a window of at least two aligned frames.
ActingBackground build_background(const HistoryWindow& window);

}  // namespace mctrack
