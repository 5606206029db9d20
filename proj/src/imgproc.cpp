#include "orchard/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orchard {

Hsv rgb_to_hsv(Rgb8 p) {
  const int mx = std::max({p.r, p.g, p.b});
  const int mn = std::min({p.r, p.g, p.b});
  const int delta = mx - mn;
  Hsv out;
  out.v = static_cast<float>(mx / 255.0);
  if (mx == 0 || delta == 0) return out;
  out.s = static_cast<float>(static_cast<double>(delta) / mx);
  double h;
  if (mx == p.r) {
    h = 60.0 * (static_cast<double>(p.g - p.b) / delta);
  } else if (mx == p.g) {
    h = 60.0 * (static_cast<double>(p.b - p.r) / delta + 2.0);
  } else {
    h = 60.0 * (static_cast<double>(p.r - p.g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = static_cast<float>(h);
  return out;
}

HsvImage rgb_to_hsv(const RgbImage& rgb) {
  HsvImage out(rgb.width(), rgb.height());
  for (std::size_t i = 0; i < rgb.size(); ++i) out.pixels()[i] = rgb_to_hsv(rgb.pixels()[i]);
  return out;
}

bool HsvRange::contains(const Hsv& p) const {
  float h = std::fmod(p.h, 360.f);
  if (h < 0.f) h += 360.f;
  const bool hue_ok = h_lo <= h_hi ? (h >= h_lo && h <= h_hi) : (h >= h_lo || h <= h_hi);
  return hue_ok && p.s >= s_lo && p.s <= s_hi && p.v >= v_lo && p.v <= v_hi;
}

Mask hsv_in_range(const HsvImage& img, const HsvRange& range) {
  Mask out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out.pixels()[i] = range.contains(img.pixels()[i]);
  return out;
}

namespace {

// One-dimensional pass of a separable rectangular filter. For each output
// position the window covers input offsets [-anchor, len - 1 - anchor];
// dilation sets when any input is set, erosion when the whole window is
// inside the line and set.
void morph_line(const std::uint8_t* in, std::uint8_t* out, int n, std::ptrdiff_t stride, int len,
                MorphMode mode, std::vector<int>& prefix) {
  const int anchor = len / 2;
  prefix.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + (in[i * stride] != 0);
  for (int i = 0; i < n; ++i) {
    const int lo = i - anchor;
    const int hi = i - anchor + len - 1;
    const int clo = std::max(lo, 0);
    const int chi = std::min(hi, n - 1);
    const int count = chi >= clo ? prefix[chi + 1] - prefix[clo] : 0;
    if (mode == MorphMode::Dilate) {
      out[i * stride] = count > 0;
    } else {
      out[i * stride] = (lo >= 0 && hi <= n - 1 && count == len);
    }
  }
}

}  // namespace

Mask morph(const Mask& mask, Kernel kernel, MorphMode mode) {
  if (kernel.width <= 0 || kernel.height <= 0)
    throw DomainError("morphology kernel must have positive size");
  if (kernel.width > mask.width() || kernel.height > mask.height())
    throw DomainError("morphology kernel larger than image");
  const int w = mask.width();
  const int h = mask.height();
  Mask tmp(w, h);
  Mask out(w, h);
  std::vector<int> prefix;
  for (int r = 0; r < h; ++r)
    morph_line(mask.data() + static_cast<std::size_t>(r) * w, tmp.data() + static_cast<std::size_t>(r) * w,
               w, 1, kernel.width, mode, prefix);
  for (int c = 0; c < w; ++c)
    morph_line(tmp.data() + c, out.data() + c, h, w, kernel.height, mode, prefix);
  return out;
}

Mask median3x3(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  // Horizontal 3-sums, then vertical sums of those.
  Image<std::uint8_t> rows(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      int s = mask(r, c);
      if (c > 0) s += mask(r, c - 1);
      if (c + 1 < w) s += mask(r, c + 1);
      rows(r, c) = static_cast<std::uint8_t>(s);
    }
  }
  Mask out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      int s = rows(r, c);
      if (r > 0) s += rows(r - 1, c);
      if (r + 1 < h) s += rows(r + 1, c);
      out(r, c) = s >= 5;
    }
  }
  return out;
}

namespace {

template <typename Op>
Mask combine(const Mask& a, const Mask& b, Op op) {
  if (!a.same_shape(b)) throw DomainError("mask dimensions differ");
  Mask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.pixels()[i] = op(a.pixels()[i] != 0, b.pixels()[i] != 0);
  return out;
}

}  // namespace

Mask mask_or(const Mask& a, const Mask& b) { return combine(a, b, [](bool x, bool y) { return x || y; }); }
Mask mask_and(const Mask& a, const Mask& b) { return combine(a, b, [](bool x, bool y) { return x && y; }); }
Mask mask_and_not(const Mask& a, const Mask& b) {
  return combine(a, b, [](bool x, bool y) { return x && !y; });
}
Mask mask_not(const Mask& a) {
  Mask out(a.width(), a.height());
  for (std::size_t i = 0; i < a.size(); ++i) out.pixels()[i] = !a.pixels()[i];
  return out;
}

LabeledRegions connected_components(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  LabeledRegions out;
  out.labels = Image<int>(w, h, 0);
  std::vector<std::pair<int, int>> stack;
  for (int r0 = 0; r0 < h; ++r0) {
    for (int c0 = 0; c0 < w; ++c0) {
      if (!mask(r0, c0) || out.labels(r0, c0)) continue;
      const int label = out.count() + 1;
      RegionStats st;
      st.bbox = {r0, c0, r0, c0};
      double sum_r = 0.0, sum_c = 0.0;
      out.labels(r0, c0) = label;
      stack.push_back({r0, c0});
      while (!stack.empty()) {
        const auto [r, c] = stack.back();
        stack.pop_back();
        ++st.area;
        sum_r += r;
        sum_c += c;
        st.bbox.min_row = std::min(st.bbox.min_row, r);
        st.bbox.max_row = std::max(st.bbox.max_row, r);
        st.bbox.min_col = std::min(st.bbox.min_col, c);
        st.bbox.max_col = std::max(st.bbox.max_col, c);
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = r + dr, cc = c + dc;
            if (rr < 0 || rr >= h || cc < 0 || cc >= w) continue;
            if (mask(rr, cc) && !out.labels(rr, cc)) {
              out.labels(rr, cc) = label;
              stack.push_back({rr, cc});
            }
          }
        }
      }
      st.centroid_row = sum_r / static_cast<double>(st.area);
      st.centroid_col = sum_c / static_cast<double>(st.area);
      out.regions.push_back(st);
    }
  }
  return out;
}

namespace {

// Felzenszwalb-Huttenlocher lower envelope of parabolas: out[q] =
// min_p (q - p)^2 + f[p], exact for integer sample positions.
void squared_distance_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v,
                         std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  d.assign(n, inf);
  v.assign(n, 0);
  z.assign(static_cast<std::size_t>(n) + 1, 0.0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == inf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[k];
      s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) / (2.0 * (q - p));
      if (s > z[k]) break;
      --k;  // z[0] is -inf, so k never drops below 0
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  if (k < 0) return;
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double dq = q - v[j];
    d[q] = dq * dq + f[v[j]];
  }
}

}  // namespace

RealImage distance_transform(const Mask& mask) {
  // Padded by one background pixel on every side.
  const int w = mask.width() + 2;
  const int h = mask.height() + 2;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> grid(static_cast<std::size_t>(w) * h, 0.0);
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c)
      grid[static_cast<std::size_t>(r + 1) * w + (c + 1)] = mask(r, c) ? inf : 0.0;

  std::vector<double> f, d, z;
  std::vector<int> v;
  for (int c = 0; c < w; ++c) {
    f.resize(h);
    for (int r = 0; r < h; ++r) f[r] = grid[static_cast<std::size_t>(r) * w + c];
    squared_distance_1d(f, d, v, z);
    for (int r = 0; r < h; ++r) grid[static_cast<std::size_t>(r) * w + c] = d[r];
  }
  for (int r = 0; r < h; ++r) {
    f.assign(grid.begin() + static_cast<std::ptrdiff_t>(r) * w, grid.begin() + static_cast<std::ptrdiff_t>(r + 1) * w);
    squared_distance_1d(f, d, v, z);
    std::copy(d.begin(), d.end(), grid.begin() + static_cast<std::ptrdiff_t>(r) * w);
  }

  RealImage out(mask.width(), mask.height(), 0.0);
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c)
      if (mask(r, c)) out(r, c) = std::sqrt(grid[static_cast<std::size_t>(r + 1) * w + (c + 1)]);
  return out;
}

RealImage distance_transform_normalized(const Mask& mask) {
  RealImage dist = distance_transform(mask);
  const LabeledRegions cc = connected_components(mask);
  std::vector<double> peak(static_cast<std::size_t>(cc.count()) + 1, 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const int l = cc.labels.pixels()[i];
    if (l) peak[l] = std::max(peak[l], dist.pixels()[i]);
  }
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const int l = cc.labels.pixels()[i];
    if (l) dist.pixels()[i] /= peak[l];
  }
  return dist;
}

Mask threshold(const RealImage& img, double t) {
  Mask out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out.pixels()[i] = img.pixels()[i] >= t;
  return out;
}

}  // namespace orchard
