#include "mctrack/foreground.hpp"

#include <cmath>

namespace mctrack {

LevelBands LevelBands::for_eta(int eta) {
  if (eta < 2) throw InsufficientHistoryError("level bands need eta >= 2");
  constexpr int chi = 255;
  return {eta, (eta - 1) / 3, eta - 1, static_cast<double>(chi / 3),
          static_cast<double>(2 * chi / 3)};
}

Level LevelBands::weight_level(int w) const {
  if (w == weight_high) return Level::High;
  if (w <= weight_low_max) return Level::Low;
  return Level::Medium;
}

Level LevelBands::intensity_level(double v) const {
  if (v <= intensity_low_max) return Level::Low;
  if (v >= intensity_high_min) return Level::High;
  return Level::Medium;
}

GrayImage difference_foreground(const GrayImage& current, const ActingBackground& bg) {
  require_same_shape(current, bg.background, "difference_foreground");
  require_same_shape(current, bg.weight, "difference_foreground");
  const int stable = bg.eta - 1;
  GrayImage out(current.width(), current.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = bg.weight[i] == stable ? 0.0 : std::abs(current[i] - bg.background[i]);
  return out;
}

std::uint8_t classify_pixel(Level weight, Level dissimilarity, Level difference) {
  switch (weight) {
    case Level::Medium:
      return difference >= dissimilarity ? 1 : 0;
    case Level::Low:
      // Strict > here versus >= for medium weights.
      return dissimilarity == Level::Low && difference > dissimilarity ? 1 : 0;
    case Level::High:
      return 0;
  }
  return 0;
}

Mask classify_moving(const GrayImage& difference, const WeightImage& weight,
                     const GrayImage& dissimilarity, const LevelBands& bands) {
  require_same_shape(difference, weight, "classify_moving");
  require_same_shape(difference, dissimilarity, "classify_moving");
  Mask mask(difference.width(), difference.height(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = classify_pixel(bands.weight_level(weight[i]),
                             bands.intensity_level(dissimilarity[i]),
                             bands.intensity_level(difference[i]));
  }
  return mask;
}

}  // namespace mctrack
