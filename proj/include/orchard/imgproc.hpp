#pragma once

#include <vector>

#include "orchard/image.hpp"

namespace orchard {

/// H in [0, 360) degrees, S and V in [0, 1]. H is 0 when S is 0.
struct Hsv {
  float h = 0.f;
  float s = 0.f;
  float v = 0.f;
};

using HsvImage = Image<Hsv>;

Hsv rgb_to_hsv(Rgb8 p);
HsvImage rgb_to_hsv(const RgbImage& rgb);

/// Closed interval per channel. When h_lo > h_hi the hue interval wraps
/// through 0, e.g. [350, 10] for red.
struct HsvRange {
  float h_lo = 0.f, h_hi = 360.f;
  float s_lo = 0.f, s_hi = 1.f;
  float v_lo = 0.f, v_hi = 1.f;

  bool contains(const Hsv& p) const;
};

Mask hsv_in_range(const HsvImage& img, const HsvRange& range);

enum class MorphMode { Dilate, Erode };

/// Rectangular structuring element, anchored at (height/2, width/2).
struct Kernel {
  int height = 3;
  int width = 3;
};

/// Binary dilation / erosion; pixels outside the image count as background
/// for both modes. Throws DomainError if the kernel is non-positive or
/// larger than the image.
Mask morph(const Mask& mask, Kernel kernel, MorphMode mode);
inline Mask dilate(const Mask& m, Kernel k) { return morph(m, k, MorphMode::Dilate); }
inline Mask erode(const Mask& m, Kernel k) { return morph(m, k, MorphMode::Erode); }

/// 3x3 majority filter with background padding.
Mask median3x3(const Mask& mask);

Mask mask_or(const Mask& a, const Mask& b);
Mask mask_and(const Mask& a, const Mask& b);
Mask mask_and_not(const Mask& a, const Mask& b);
Mask mask_not(const Mask& a);

struct RegionStats {
  long area = 0;
  PixelBox bbox;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
};

/// labels: 0 background, 1..N in raster order of first pixel;
/// regions[l - 1] describes label l.
struct LabeledRegions {
  Image<int> labels;
  std::vector<RegionStats> regions;

  int count() const { return static_cast<int>(regions.size()); }
};

/// 8-connected component labelling.
LabeledRegions connected_components(const Mask& mask);

/// Exact Euclidean distance from each set pixel to the nearest unset pixel,
/// treating everything outside the image as unset; unset pixels are 0.
RealImage distance_transform(const Mask& mask);

/// distance_transform divided, per 8-connected component, by that
/// component's maximum, so every component peaks at exactly 1.
RealImage distance_transform_normalized(const Mask& mask);

/// value >= threshold.
Mask threshold(const RealImage& img, double threshold);

/// Copy of the sub-rectangle `box` (must lie inside the image).
template <typename T>
Image<T> crop(const Image<T>& img, const PixelBox& box) {
  if (box.empty() || !img.in_bounds(box.min_row, box.min_col) ||
      !img.in_bounds(box.max_row, box.max_col))
    throw DomainError("crop rectangle outside image");
  Image<T> out(box.width(), box.height());
  for (int r = 0; r < box.height(); ++r)
    for (int c = 0; c < box.width(); ++c) out(r, c) = img(box.min_row + r, box.min_col + c);
  return out;
}

}  // namespace orchard
