#pragma once

#include "mctrack/background_model.hpp"
#include "mctrack/image.hpp"

namespace mctrack {

enum class Level { Low = 0, Medium = 1, High = 2 };

/// Three-way partition of weights (by eta) and of dissimilarities and
/// foreground differences (by the gray range 0..255).
struct LevelBands {
  int eta = 4;
  int weight_low_max = 1;    // floor((eta-1)/3)
  int weight_high = 3;       // eta-1
  double intensity_low_max = 85.0;    // floor(255/3)
  double intensity_high_min = 170.0;  // floor(2*255/3)

  static LevelBands for_eta(int eta);

  Level weight_level(int w) const;
  Level intensity_level(double v) const;
};

/// F = |v - B| after zeroing both where the weight is eta-1.
GrayImage difference_foreground(const GrayImage& current, const ActingBackground& bg);

/// Per-pixel moving/flicker decision. Cases without an explicit rule map to 0.
std::uint8_t classify_pixel(Level weight, Level dissimilarity, Level difference);

Mask classify_moving(const GrayImage& difference, const WeightImage& weight,
                     const GrayImage& dissimilarity, const LevelBands& bands);

}  // namespace mctrack
