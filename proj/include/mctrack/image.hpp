#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mctrack/errors.hpp"

namespace mctrack {

/// Dense row-major image. Width is the column count, height the row count.
template <typename T>
class Image {
 public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked(width, height)), fill) {}
  Image(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(checked(width, height)))
      throw DimensionError("pixel buffer does not match image dimensions");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> pixels() & noexcept { return data_; }
  std::span<const T> pixels() const& noexcept { return data_; }
  // Temporaries hand over their buffer so range-for over them stays valid.
  std::vector<T> pixels() && noexcept { return std::move(data_); }
  const std::vector<T>& data() const& noexcept { return data_; }
  std::vector<T> data() && noexcept { return std::move(data_); }

  template <typename U>
  bool same_shape(const Image<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  static long checked(int width, int height) {
    if (width < 0 || height < 0) throw DimensionError("negative image dimension");
    return static_cast<long>(width) * height;
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using GrayImage = Image<double>;
using BucketImage = Image<std::uint8_t>;
using WeightImage = Image<int>;
using Mask = Image<std::uint8_t>;

/// A grayscale frame. Intensities are real-valued in [0, 255].
struct Frame {
  int index = 0;  // 1-based position in the sequence
  GrayImage pixels;

  int width() const noexcept { return pixels.width(); }
  int height() const noexcept { return pixels.height(); }
};

template <typename T, typename U>
void require_same_shape(const Image<T>& a, const Image<U>& b, const char* what) {
  if (!a.same_shape(b)) throw DimensionError(std::string(what) + ": image shapes differ");
}

/// Integer pixel rectangle, top-left origin.
struct Box {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  friend bool operator==(const Box&, const Box&) = default;
};

}  // namespace mctrack
