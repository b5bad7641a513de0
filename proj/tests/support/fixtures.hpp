#pragma once

#include <vector>

#include "mctrack/blob_refinement.hpp"
#include "oracles.hpp"

namespace fixtures {

inline mctrack::Blob rect_blob(int x, int y, int w, int h) {
  std::vector<mctrack::Pixel> px;
  for (int r = y; r < y + h; ++r)
    for (int c = x; c < x + w; ++c) px.push_back({c, r});
  return mctrack::Blob(px);
}

/// Boundary pixels of a solid rectangle.
inline std::vector<mctrack::Pixel> rect_perimeter(int x, int y, int w, int h) {
  std::vector<mctrack::Pixel> px;
  for (int r = y; r < y + h; ++r)
    for (int c = x; c < x + w; ++c)
      if (r == y || r == y + h - 1 || c == x || c == x + w - 1) px.push_back({c, r});
  return px;
}

inline void paint(mctrack::GrayImage& img, int x, int y, int w, int h, double v) {
  for (int r = y; r < y + h; ++r)
    for (int c = x; c < x + w; ++c)
      if (img.contains(c, r)) img.at(c, r) = v;
}

inline void stamp(mctrack::Mask& m, const mctrack::Blob& blob) {
  for (const auto& p : blob.pixels()) m.at(p.x, p.y) = 1;
}

inline mctrack::Mask mask_of(const mctrack::Blob& blob, int w, int h) {
  mctrack::Mask m(w, h, 0);
  for (const auto& p : blob.pixels()) m.at(p.x, p.y) = 1;
  return m;
}

/// A random blob: a union of 1-4 overlapping rectangles with random holes,
/// kept inside a `w` x `h` frame with a margin.
inline mctrack::Blob random_blob(oracle::Rng& rng, int w, int h) {
  std::vector<mctrack::Pixel> px;
  const int cx = rng.uniform_int(w / 4, 3 * w / 4);
  const int cy = rng.uniform_int(h / 4, 3 * h / 4);
  const int parts = rng.uniform_int(1, 4);
  for (int k = 0; k < parts; ++k) {
    const int rw = rng.uniform_int(2, w / 5);
    const int rh = rng.uniform_int(2, h / 5);
    const int x0 = std::clamp(cx + rng.uniform_int(-rw, rw / 2), 1, w - rw - 1);
    const int y0 = std::clamp(cy + rng.uniform_int(-rh, rh / 2), 1, h - rh - 1);
    for (int r = y0; r < y0 + rh; ++r)
      for (int c = x0; c < x0 + rw; ++c)
        if (!rng.coin(0.05)) px.push_back({c, r});
  }
  if (px.empty()) px.push_back({cx, cy});
  return mctrack::Blob(px);
}

}  // namespace fixtures
