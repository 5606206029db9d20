#pragma once

#include <cstdint>
#include <vector>

#include "orchard/errors.hpp"

namespace orchard {

/// Dense row-major single-plane image. Pixels are addressed (row, col).
template <typename T>
class Image {
public:
  using value_type = T;

  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height), data_(checked_size(width, height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }
  const T& operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * width_ + col];
  }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& pixels() { return data_; }
  const std::vector<T>& pixels() const { return data_; }

  bool same_shape(int width, int height) const { return width_ == width && height_ == height; }
  template <typename U>
  bool same_shape(const Image<U>& o) const {
    return width_ == o.width() && height_ == o.height();
  }

  friend bool operator==(const Image&, const Image&) = default;

private:
  static std::size_t checked_size(int width, int height) {
    if (width < 0 || height < 0) throw DomainError("image dimensions must be non-negative");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend constexpr bool operator==(const Rgb8&, const Rgb8&) = default;
};

using RgbImage = Image<Rgb8>;
/// Metric depth along the viewing ray; +inf where nothing was hit.
using DepthImage = Image<float>;
/// Binary mask; every pixel is 0 or 1.
using Mask = Image<std::uint8_t>;
using RealImage = Image<double>;

/// Inclusive pixel rectangle.
struct PixelBox {
  int min_row = 0;
  int min_col = 0;
  int max_row = -1;
  int max_col = -1;

  int width() const { return max_col - min_col + 1; }
  int height() const { return max_row - min_row + 1; }
  long area() const { return empty() ? 0 : static_cast<long>(width()) * height(); }
  bool empty() const { return max_row < min_row || max_col < min_col; }
  bool contains(int row, int col) const {
    return row >= min_row && row <= max_row && col >= min_col && col <= max_col;
  }
  friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

inline std::size_t popcount(const Mask& m) {
  std::size_t n = 0;
  for (auto v : m.pixels()) n += v != 0;
  return n;
}

}  // namespace orchard
