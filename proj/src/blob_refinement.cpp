#include "mctrack/blob_refinement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mctrack {
namespace {

constexpr int kNeighbourDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kNeighbourDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

// Dense occupancy over a rectangle; cheaper than searching sorted vectors.
class Occupancy {
 public:
  explicit Occupancy(const Box& region)
      : region_(region),
        cells_(static_cast<std::size_t>(std::max(region.w, 0)) * std::max(region.h, 0), 0) {}

  bool inside(Pixel p) const {
    return p.x >= region_.x && p.y >= region_.y && p.x < region_.x + region_.w &&
           p.y < region_.y + region_.h;
  }
  bool test(Pixel p) const { return inside(p) && cells_[offset(p)] != 0; }
  void set(Pixel p) { cells_[offset(p)] = 1; }

 private:
  std::size_t offset(Pixel p) const {
    return static_cast<std::size_t>(p.y - region_.y) * static_cast<std::size_t>(region_.w) +
           static_cast<std::size_t>(p.x - region_.x);
  }
  Box region_;
  std::vector<std::uint8_t> cells_;
};

Occupancy occupancy_of(const Blob& blob, const Box& region) {
  Occupancy occ(region);
  for (const Pixel& p : blob.pixels()) occ.set(p);
  return occ;
}

// Labels 8-connected foreground components in raster order of first pixel.
std::vector<std::vector<Pixel>> label_components(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  std::vector<int> labels(mask.size(), -1);
  std::vector<std::vector<Pixel>> components;
  std::vector<Pixel> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t start = static_cast<std::size_t>(y) * w + x;
      if (!mask[start] || labels[start] >= 0) continue;
      const int label = static_cast<int>(components.size());
      components.emplace_back();
      labels[start] = label;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        components.back().push_back(p);
        for (int k = 0; k < 8; ++k) {
          const int nx = p.x + kNeighbourDx[k];
          const int ny = p.y + kNeighbourDy[k];
          if (!mask.contains(nx, ny)) continue;
          const std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
          if (mask[idx] && labels[idx] < 0) {
            labels[idx] = label;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  }
  return components;
}

}  // namespace

Blob::Blob(std::vector<Pixel> pixels) : pixels_(std::move(pixels)) {
  std::sort(pixels_.begin(), pixels_.end());
  pixels_.erase(std::unique(pixels_.begin(), pixels_.end()), pixels_.end());
  if (pixels_.empty()) return;
  int x0 = std::numeric_limits<int>::max(), y0 = x0;
  int x1 = std::numeric_limits<int>::min(), y1 = x1;
  double sum_r = 0.0, sum_c = 0.0;
  for (const Pixel& p : pixels_) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
    sum_r += p.y;
    sum_c += p.x;
  }
  box_ = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
  centroid_row_ = sum_r / static_cast<double>(pixels_.size());
  centroid_col_ = sum_c / static_cast<double>(pixels_.size());
}

bool Blob::contains(Pixel p) const {
  return std::binary_search(pixels_.begin(), pixels_.end(), p);
}

bool Blob::subset_of(const Blob& other) const {
  return std::includes(other.pixels_.begin(), other.pixels_.end(), pixels_.begin(),
                       pixels_.end());
}

std::vector<Blob> connected_components(const Mask& mask, int min_area) {
  std::vector<Blob> blobs;
  for (auto& component : label_components(mask)) {
    if (static_cast<int>(component.size()) < min_area) continue;
    blobs.emplace_back(std::move(component));
  }
  return blobs;
}

double centroid_boundary_distance(const Blob& blob) {
  const Occupancy occ = occupancy_of(blob, blob.box());
  double best = std::numeric_limits<double>::infinity();
  for (const Pixel& p : blob.pixels()) {
    bool boundary = false;
    for (int k = 0; k < 8 && !boundary; ++k)
      boundary = !occ.test({p.x + kNeighbourDx[k], p.y + kNeighbourDy[k]});
    if (!boundary) continue;
    best = std::min(best, std::hypot(p.y - blob.centroid_row(), p.x - blob.centroid_col()));
  }
  return std::isfinite(best) ? best : 0.0;
}

Blob dilate_blob(const Blob& blob, double alpha, int frame_width, int frame_height) {
  if (blob.empty()) return blob;
  const Box& b = blob.box();

  // Pixel centres strictly inside the scaled box.
  const double cx = b.x + b.w / 2.0;
  const double cy = b.y + b.h / 2.0;
  const double half_w = alpha * b.w / 2.0;
  const double half_h = alpha * b.h / 2.0;
  int x0 = static_cast<int>(std::floor(cx - half_w - 0.5)) + 1;
  int x1 = static_cast<int>(std::ceil(cx + half_w - 0.5)) - 1;
  int y0 = static_cast<int>(std::floor(cy - half_h - 0.5)) + 1;
  int y1 = static_cast<int>(std::ceil(cy + half_h - 0.5)) - 1;
  x0 = std::clamp(std::min(x0, b.x), 0, frame_width - 1);
  y0 = std::clamp(std::min(y0, b.y), 0, frame_height - 1);
  x1 = std::clamp(std::max(x1, b.x + b.w - 1), 0, frame_width - 1);
  y1 = std::clamp(std::max(y1, b.y + b.h - 1), 0, frame_height - 1);
  const Box region{x0, y0, x1 - x0 + 1, y1 - y0 + 1};

  const double radius = std::max(centroid_boundary_distance(blob) / 2.0, 1.0);
  const Occupancy occ = occupancy_of(blob, region);
  constexpr int kFar = std::numeric_limits<int>::max() / 4;

  // Axial distance to the nearest blob pixel along each row and column.
  std::vector<int> row_gap(static_cast<std::size_t>(region.w) * region.h, kFar);
  std::vector<int> col_gap(row_gap.size(), kFar);
  auto at = [&](int x, int y) {
    return static_cast<std::size_t>(y - y0) * static_cast<std::size_t>(region.w) +
           static_cast<std::size_t>(x - x0);
  };
  for (int y = y0; y <= y1; ++y) {
    int last = -kFar;
    for (int x = x0; x <= x1; ++x) {
      if (occ.test({x, y})) last = x;
      row_gap[at(x, y)] = std::min(row_gap[at(x, y)], x - last);
    }
    last = kFar;
    for (int x = x1; x >= x0; --x) {
      if (occ.test({x, y})) last = x;
      row_gap[at(x, y)] = std::min(row_gap[at(x, y)], last - x);
    }
  }
  for (int x = x0; x <= x1; ++x) {
    int last = -kFar;
    for (int y = y0; y <= y1; ++y) {
      if (occ.test({x, y})) last = y;
      col_gap[at(x, y)] = std::min(col_gap[at(x, y)], y - last);
    }
    last = kFar;
    for (int y = y1; y >= y0; --y) {
      if (occ.test({x, y})) last = y;
      col_gap[at(x, y)] = std::min(col_gap[at(x, y)], last - y);
    }
  }

  std::vector<Pixel> grown = blob.pixels();
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (occ.test({x, y})) continue;
      const int gap = std::min(row_gap[at(x, y)], col_gap[at(x, y)]);
      if (gap <= radius) grown.push_back({x, y});
    }
  }
  return Blob(std::move(grown));
}

double intensity_stddev(const Blob& blob, const GrayImage& frame) {
  if (blob.empty()) return 0.0;
  double sum = 0.0;
  for (const Pixel& p : blob.pixels()) sum += frame.at(p.x, p.y);
  const double mean = sum / static_cast<double>(blob.area());
  double sq = 0.0;
  for (const Pixel& p : blob.pixels()) {
    const double d = frame.at(p.x, p.y) - mean;
    sq += d * d;
  }
  return std::sqrt(sq / static_cast<double>(blob.area()));
}

std::vector<Pixel> detect_edges(const Blob& dilated, const GrayImage& frame, double threshold) {
  std::vector<Pixel> edges;
  for (const Pixel& p : dilated.pixels()) {
    if (!frame.contains(p.x, p.y)) throw DimensionError("detect_edges: blob outside frame");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < 8; ++k) {
      const int nx = p.x + kNeighbourDx[k];
      const int ny = p.y + kNeighbourDy[k];
      if (!frame.contains(nx, ny)) continue;
      lo = std::min(lo, frame.at(nx, ny));
      hi = std::max(hi, frame.at(nx, ny));
    }
    if (hi >= lo && hi - lo >= threshold) edges.push_back(p);
  }
  return edges;
}

std::optional<Blob> trim_and_intersect(const Blob& dilated, const std::vector<Pixel>& edges) {
  if (dilated.empty() || edges.empty()) return std::nullopt;
  const Box& b = dilated.box();
  constexpr int kNone = std::numeric_limits<int>::max();
  std::vector<std::pair<int, int>> row_span(static_cast<std::size_t>(b.h), {kNone, -kNone});
  std::vector<std::pair<int, int>> col_span(static_cast<std::size_t>(b.w), {kNone, -kNone});
  for (const Pixel& e : edges) {
    if (e.x < b.x || e.y < b.y || e.x >= b.x + b.w || e.y >= b.y + b.h) continue;
    auto& r = row_span[static_cast<std::size_t>(e.y - b.y)];
    r = {std::min(r.first, e.x), std::max(r.second, e.x)};
    auto& c = col_span[static_cast<std::size_t>(e.x - b.x)];
    c = {std::min(c.first, e.y), std::max(c.second, e.y)};
  }

  std::vector<Pixel> kept;
  for (const Pixel& p : dilated.pixels()) {
    const auto& r = row_span[static_cast<std::size_t>(p.y - b.y)];
    const auto& c = col_span[static_cast<std::size_t>(p.x - b.x)];
    const bool in_row = p.x >= r.first && p.x <= r.second;
    const bool in_col = p.y >= c.first && p.y <= c.second;
    if (in_row && in_col) kept.push_back(p);
  }
  if (kept.empty()) return std::nullopt;
  return Blob(std::move(kept));
}

std::array<int, 3> histogram_peaks(const Blob& blob, const GrayImage& frame) {
  std::array<int, 256> histogram{};
  for (const Pixel& p : blob.pixels()) {
    const double v = std::clamp(frame.at(p.x, p.y), 0.0, 255.0);
    ++histogram[static_cast<std::size_t>(std::floor(v + 0.5))];
  }
  std::array<int, 256> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return histogram[static_cast<std::size_t>(a)] > histogram[static_cast<std::size_t>(b)];
  });
  std::array<int, 3> peaks{order[0], order[0], order[0]};
  for (std::size_t k = 1; k < 3; ++k)
    if (histogram[static_cast<std::size_t>(order[k])] > 0) peaks[k] = order[k];
  return peaks;
}

DetectedObject extract_features(const Blob& blob, const GrayImage& frame) {
  if (blob.empty()) throw DimensionError("extract_features: empty blob");
  DetectedObject obj;
  obj.row = blob.centroid_row();
  obj.col = blob.centroid_col();
  obj.height = blob.box().h;
  obj.width = blob.box().w;
  obj.box = blob.box();
  obj.peaks = histogram_peaks(blob, frame);
  return obj;
}

std::vector<DetectedObject> refine_objects(const Mask& mask, const GrayImage& frame,
                                           const RefinementParams& params,
                                           RefinementTrace* trace) {
  require_same_shape(mask, frame, "refine_objects");
  const std::vector<Blob> blobs = connected_components(mask, params.min_blob_area);

  // Dilated blobs that overlap or touch are merged into one object.
  Mask grown(mask.width(), mask.height(), 0);
  for (const Blob& blob : blobs) {
    const Blob dilated = dilate_blob(blob, params.alpha, frame.width(), frame.height());
    for (const Pixel& p : dilated.pixels()) grown.at(p.x, p.y) = 1;
  }
  std::vector<Blob> merged_dilated;
  for (auto& component : label_components(grown)) merged_dilated.emplace_back(std::move(component));

  std::vector<DetectedObject> objects;
  for (const Blob& dilated : merged_dilated) {
    std::vector<Pixel> source;
    for (const Blob& blob : blobs)
      if (dilated.contains(blob.pixels().front()))
        source.insert(source.end(), blob.pixels().begin(), blob.pixels().end());
    const Blob original(std::move(source));
    if (trace) {
      trace->original.push_back(original);
      trace->dilated.push_back(dilated);
    }

    const auto refined = trim_and_intersect(dilated, detect_edges(original, dilated, frame));
    if (!refined) continue;
    const Box& box = refined->box();
    if (box.w < params.min_object_side || box.h < params.min_object_side) continue;
    if (static_cast<long>(box.w) * box.h < params.min_blob_area) continue;
    if (trace) trace->refined.push_back(*refined);
    objects.push_back(extract_features(*refined, frame));
  }
  return objects;
}

}  // namespace mctrack
