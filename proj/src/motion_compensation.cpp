#include "mctrack/motion_compensation.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "mctrack/background_model.hpp"

namespace mctrack {
namespace {

constexpr double kNormalisationGuard = 1e-12;

void require_transformable(int width, int height) {
  if (width < 2 || height < 2)
    throw DimensionError("frames need at least 2 pixels along each axis");
}

int wrap_peak(int peak, int size) {
  // 1-based peak position; positions past the midpoint are negative shifts.
  const int one_based = peak + 1;
  return one_based > size / 2.0 ? one_based - size - 1 : one_based - 1;
}

}  // namespace

Spectrum forward_transform(const GrayImage& image) {
  require_transformable(image.width(), image.height());
  Spectrum s{image.width(), image.height(), {}};
  s.coefficients.assign(image.pixels().begin(), image.pixels().end());
  detail::dft2d(s.coefficients, s.width, s.height, -1);
  return s;
}

GrayImage inverse_transform(const Spectrum& spectrum) {
  require_transformable(spectrum.width, spectrum.height);
  auto data = spectrum.coefficients;
  detail::dft2d(data, spectrum.width, spectrum.height, +1);
  const double scale = 1.0 / static_cast<double>(data.size());
  GrayImage out(spectrum.width, spectrum.height);
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real() * scale;
  return out;
}

ShiftEstimate phase_correlate(const Spectrum& reference, const Spectrum& moved) {
  if (reference.width != moved.width || reference.height != moved.height)
    throw DimensionError("phase_correlate: spectra differ in size");
  require_transformable(reference.width, reference.height);

  const std::size_t count = reference.coefficients.size();
  std::vector<std::complex<double>> cross(count);
  bool any_signal = false;
  for (std::size_t i = 0; i < count; ++i) {
    const auto product = moved.coefficients[i] * std::conj(reference.coefficients[i]);
    const double magnitude = std::abs(product);
    if (magnitude > kNormalisationGuard) {
      cross[i] = product / magnitude;
      any_signal = true;
    }
  }
  if (!any_signal) throw NoSignalError("phase_correlate: spectra carry no energy");

  detail::dft2d(cross, reference.width, reference.height, +1);
  const double scale = 1.0 / static_cast<double>(count);
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i)
    if (cross[i].real() > cross[best].real()) best = i;

  const int px = static_cast<int>(best % static_cast<std::size_t>(reference.width));
  const int py = static_cast<int>(best / static_cast<std::size_t>(reference.width));
  return {wrap_peak(px, reference.width), wrap_peak(py, reference.height),
          cross[best].real() * scale};
}

GrayImage compensate(const Spectrum& moved, const ShiftEstimate& shift) {
  require_transformable(moved.width, moved.height);
  if (std::abs(shift.dx) >= moved.width || std::abs(shift.dy) >= moved.height)
    throw DimensionError("compensate: shift exceeds frame size");

  const int w = moved.width;
  const int h = moved.height;
  auto mod = [](long a, int b) { return static_cast<int>(((a % b) + b) % b); };
  Spectrum ramped{w, h, moved.coefficients};
  for (int n = 0; n < h; ++n) {
    // Reduce the phase numerators modulo the size so the exponent stays exact.
    const double fy = static_cast<double>(mod(static_cast<long>(n) * shift.dy, h)) / h;
    for (int m = 0; m < w; ++m) {
      const double fx = static_cast<double>(mod(static_cast<long>(m) * shift.dx, w)) / w;
      ramped.coefficients[static_cast<std::size_t>(n) * w + m] *=
          std::polar(1.0, 2.0 * std::numbers::pi * (fx + fy));
    }
  }
  return inverse_transform(ramped);
}

HistoryWindow align_history(const Spectrum& current,
                            const std::vector<const Spectrum*>& predecessors) {
  HistoryWindow window;
  window.frames.reserve(predecessors.size());
  for (const Spectrum* spectrum : predecessors) {
    if (spectrum->width != current.width || spectrum->height != current.height)
      throw DimensionError("align_history: predecessor differs in size");
    const ShiftEstimate shift = phase_correlate(current, *spectrum);
    window.frames.push_back(compensate(*spectrum, shift));
    window.quantized.push_back(quantize(window.frames.back()));
    window.shifts.push_back(shift);
  }
  return window;
}

HistoryWindow align_history(const Frame& current, const std::vector<Frame>& predecessors) {
  const Spectrum reference = forward_transform(current);
  std::vector<Spectrum> spectra;
  spectra.reserve(predecessors.size());
  for (const Frame& f : predecessors) {
    require_same_shape(f.pixels, current.pixels, "align_history");
    spectra.push_back(forward_transform(f));
  }
  std::vector<const Spectrum*> refs;
  for (const auto& s : spectra) refs.push_back(&s);
  return align_history(reference, refs);
}

GrayImage circular_shift(const GrayImage& image, int dx, int dy) {
  const int w = image.width();
  const int h = image.height();
  GrayImage out(w, h);
  for (int y = 0; y < h; ++y) {
    const int sy = ((y - dy) % h + h) % h;
    for (int x = 0; x < w; ++x) out.at(x, y) = image.at(((x - dx) % w + w) % w, sy);
  }
  return out;
}

}  // namespace mctrack
