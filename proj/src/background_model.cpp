#include "mctrack/background_model.hpp"

#include <cmath>

namespace mctrack {

std::uint8_t quantize_value(double intensity) {
  // h*10/255 is exact at bucket boundaries for integer intensities.
  const double scaled = std::ceil(intensity * kQuantizationLevels / 255.0);
  if (scaled <= 1.0) return 1;
  if (scaled >= kQuantizationLevels) return kQuantizationLevels;
  return static_cast<std::uint8_t>(scaled);
}

BucketImage quantize(const GrayImage& image) {
  BucketImage out(image.width(), image.height());
  for (std::size_t i = 0; i < image.size(); ++i) out[i] = quantize_value(image[i]);
  return out;
}

GrayImage intersect_pair(const GrayImage& first, const GrayImage& second,
                         const BucketImage& first_q, const BucketImage& second_q) {
  require_same_shape(first, second, "intersect_pair");
  require_same_shape(first, first_q, "intersect_pair");
  require_same_shape(first, second_q, "intersect_pair");
  GrayImage out(first.width(), first.height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = buckets_agree(first_q[i], second_q[i]) ? (first[i] + second[i]) / 2.0 : 0.0;
  return out;
}

ActingBackground build_background(const HistoryWindow& window) {
  const int eta = window.eta();
  if (eta < 2) throw InsufficientHistoryError("background model needs at least 2 history frames");
  if (window.quantized.size() != window.frames.size())
    throw DimensionError("history window is missing quantized frames");
  const GrayImage& first = window.frames.front();
  for (int i = 0; i < eta; ++i) {
    require_same_shape(first, window.frames[static_cast<std::size_t>(i)], "build_background");
    require_same_shape(first, window.quantized[static_cast<std::size_t>(i)], "build_background");
  }

  const int w = first.width();
  const int h = first.height();
  ActingBackground bg{eta, GrayImage(w, h), GrayImage(w, h), WeightImage(w, h, 0)};

  for (std::size_t l = 0; l < first.size(); ++l) {
    double intersection_sum = 0.0;
    int intersection_count = 0;
    double disagreement_sum = 0.0;
    int agreements = 0;
    for (int i = 0; i + 1 < eta; ++i) {
      const auto& a = window.frames[static_cast<std::size_t>(i)];
      const auto& b = window.frames[static_cast<std::size_t>(i) + 1];
      const auto& qa = window.quantized[static_cast<std::size_t>(i)];
      const auto& qb = window.quantized[static_cast<std::size_t>(i) + 1];
      if (buckets_agree(qa[l], qb[l])) {
        ++agreements;
        const double common = (a[l] + b[l]) / 2.0;
        if (common != 0.0) {
          intersection_sum += common;
          ++intersection_count;
        }
      } else {
        disagreement_sum += std::abs(a[l] - b[l]);
      }
    }
    bg.background[l] = intersection_count > 0 ? intersection_sum / intersection_count : 0.0;
    // Averaged over eta although there are eta-1 pair terms.
    bg.dissimilarity[l] = disagreement_sum / eta;
    bg.weight[l] = agreements;
  }
  return bg;
}

}  // namespace mctrack
