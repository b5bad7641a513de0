#pragma once

#include <complex>
#include <vector>

#include "mctrack/image.hpp"

namespace mctrack {

/// 2-D DFT coefficients, row-major. Frequency index m runs along x (width),
/// n along y (height).
struct Spectrum {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> coefficients;

  const std::complex<double>& at(int m, int n) const {
    return coefficients[static_cast<std::size_t>(n) * static_cast<std::size_t>(width) +
                        static_cast<std::size_t>(m)];
  }
};

/// Integer translation of a moved frame relative to its reference.
/// Positive dx is rightward, positive dy is downward.
struct ShiftEstimate {
  int dx = 0;
  int dy = 0;
  double peak_value = 0.0;

  friend bool operator==(const ShiftEstimate& a, const ShiftEstimate& b) {
    return a.dx == b.dx && a.dy == b.dy;
  }
};

/// Motion-compensated history of the current frame. frames[0] is the most
/// recent predecessor.
struct HistoryWindow {
  std::vector<GrayImage> frames;
  std::vector<BucketImage> quantized;
  std::vector<ShiftEstimate> shifts;

  int eta() const noexcept { return static_cast<int>(frames.size()); }
};

Spectrum forward_transform(const GrayImage& image);
inline Spectrum forward_transform(const Frame& frame) { return forward_transform(frame.pixels); }

/// Inverse DFT, normalised by 1/(MN); the imaginary residue is dropped.
GrayImage inverse_transform(const Spectrum& spectrum);

/// Phase correlation. Returns the circular shift s such that
/// moved(x, y) = reference(x - s.dx, y - s.dy).
ShiftEstimate phase_correlate(const Spectrum& reference, const Spectrum& moved);

/// Undoes `shift` on the moved frame through the Fourier shift theorem.
GrayImage compensate(const Spectrum& moved, const ShiftEstimate& shift);

/// Aligns each predecessor (most recent first) to `current`.
HistoryWindow align_history(const Frame& current, const std::vector<Frame>& predecessors);

/// Same as above with spectra computed up front; the pipeline caches them.
HistoryWindow align_history(const Spectrum& current,
                            const std::vector<const Spectrum*>& predecessors);

/// Circular shift: out(x, y) = in(x - dx, y - dy), indices taken modulo size.
GrayImage circular_shift(const GrayImage& image, int dx, int dy);

}  // namespace mctrack
