#include "orchard/detector.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "orchard/serialization.hpp"

namespace orchard {

namespace {

/// Hue interval as up to two non-wrapping pieces.
std::vector<std::pair<float, float>> hue_pieces(const HsvRange& r) {
  if (r.h_lo <= r.h_hi) return {{r.h_lo, r.h_hi}};
  return {{r.h_lo, 360.f}, {0.f, r.h_hi}};
}

bool hues_overlap(const HsvRange& a, const HsvRange& b) {
  for (auto [a0, a1] : hue_pieces(a))
    for (auto [b0, b1] : hue_pieces(b))
      if (a0 <= b1 && b0 <= a1) return true;
  return false;
}

void validate_range(const HsvRange& r, const char* name) {
  auto in = [](float v, float lo, float hi) { return v >= lo && v <= hi; };
  if (!in(r.h_lo, 0.f, 360.f) || !in(r.h_hi, 0.f, 360.f) || !in(r.s_lo, 0.f, 1.f) ||
      !in(r.s_hi, 0.f, 1.f) || !in(r.v_lo, 0.f, 1.f) || !in(r.v_hi, 0.f, 1.f) || r.s_lo > r.s_hi ||
      r.v_lo > r.v_hi)
    throw ConfigError(std::string("invalid HSV range '") + name + "'");
}

Vec3 to_viewer_local(const CameraModel& cam, const BedPose& bed, const Vec3& p) {
  const Vec3 d = p - bed.center;
  return {dot(d, cam.right()), dot(d, cam.forward()), d.z};
}

}  // namespace

const HsvRange& ColorProfile::fruit(PlantType t) const {
  switch (t) {
    case PlantType::Tomato: return tomato;
    case PlantType::Pepper: return pepper;
    case PlantType::Eggplant: return eggplant;
  }
  return tomato;
}

void validate(const ColorProfile& p) {
  validate_range(p.tomato, "tomato");
  validate_range(p.pepper, "pepper");
  validate_range(p.eggplant, "eggplant");
  validate_range(p.foliage, "foliage");
  validate_range(p.board, "board");
  validate_range(p.propeller, "propeller");
  if (hues_overlap(p.tomato, p.pepper) || hues_overlap(p.tomato, p.eggplant) ||
      hues_overlap(p.pepper, p.eggplant))
    throw ConfigError("fruit hue ranges must be pairwise disjoint");
}

DetectorParams DetectorParams::scaled_to(int width, int height) const {
  DetectorParams out = *this;
  const double factor = static_cast<double>(width) * height /
                        (static_cast<double>(reference_width) * reference_height);
  out.bed_area_min *= factor;
  out.fruit_area_min *= factor;
  out.fruit_bbox_area_min *= factor;
  out.dt_core_area_min *= factor;
  out.reference_width = width;
  out.reference_height = height;
  return out;
}

void validate(const DetectorParams& p) {
  if (p.bed_area_min <= 0 || p.fruit_area_min <= 0 || p.fruit_bbox_area_min <= 0 ||
      p.dt_core_area_min <= 0 || p.depth_gate <= 0 || p.reference_width <= 0 ||
      p.reference_height <= 0)
    throw ConfigError("detector thresholds must be positive");
  if (!(p.dt_threshold > 0.0 && p.dt_threshold <= 1.0))
    throw ConfigError("dt_threshold must lie in (0, 1]");
}

std::vector<BedRegion> segment_beds(const HsvImage& hsv, const DepthImage& depth,
                                    const ColorProfile& profile, const DetectorParams& params) {
  if (!hsv.same_shape(depth)) throw DomainError("colour and depth images differ in size");
  std::vector<BedRegion> out;
  if (hsv.width() < 25 || hsv.height() < 25) return out;

  Mask m = mask_or(hsv_in_range(hsv, profile.board), hsv_in_range(hsv, profile.foliage));
  m = dilate(m, {1, 25});
  m = dilate(m, {25, 1});
  m = median3x3(m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const float d = depth.pixels()[i];
    if (!(d <= params.depth_gate)) m.pixels()[i] = 0;
  }

  const LabeledRegions cc = connected_components(m);
  for (int l = 1; l <= cc.count(); ++l) {
    const RegionStats& st = cc.regions[l - 1];
    if (static_cast<double>(st.area) <= params.bed_area_min) continue;
    BedRegion region;
    region.mask = Mask(m.width(), m.height());
    for (std::size_t i = 0; i < m.size(); ++i) region.mask.pixels()[i] = cc.labels.pixels()[i] == l;
    region.bbox = st.bbox;
    region.area = st.area;
    out.push_back(std::move(region));
  }
  return out;
}

std::vector<BedRegion> segment_beds(const Frame& frame, const ColorProfile& profile,
                                    const DetectorParams& params) {
  return segment_beds(rgb_to_hsv(frame.rgb), frame.depth, profile, params);
}

Mask propeller_mask(const HsvImage& hsv, const ColorProfile& profile) {
  Mask m = hsv_in_range(hsv, profile.propeller);
  if (m.width() < 3 || m.height() < 3) return m;
  return dilate(m, {3, 3});
}

Mask propeller_mask(const Frame& frame, const ColorProfile& profile) {
  return propeller_mask(rgb_to_hsv(frame.rgb), profile);
}

std::array<PixelBox, 3> slot_partition(const PixelBox& region) {
  std::array<PixelBox, 3> slots;
  const int w = region.width();
  int start = region.min_col;
  for (int s = 0; s < 3; ++s) {
    const int end = region.min_col + static_cast<int>(std::lround(w * (s + 1) / 3.0)) - 1;
    slots[s] = {region.min_row, start, region.max_row, end};
    start = end + 1;
  }
  return slots;
}

std::vector<FruitDetection> count_fruits_in_region(const HsvImage& hsv, const PixelBox& region,
                                                   std::span<const PixelBox> slots,
                                                   const HsvRange& fruit_range,
                                                   const DetectorParams& params,
                                                   const Mask* exclude) {
  if (region.empty() || !hsv.in_bounds(region.min_row, region.min_col) ||
      !hsv.in_bounds(region.max_row, region.max_col))
    throw DomainError("region outside image bounds");
  if (exclude && !exclude->same_shape(hsv)) throw DomainError("exclusion mask size mismatch");
  long covered = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const PixelBox& s = slots[i];
    if (s.empty() || s.min_row < region.min_row || s.max_row > region.max_row ||
        s.min_col < region.min_col || s.max_col > region.max_col)
      throw DomainError("slot rectangle outside region");
    for (std::size_t j = 0; j < i; ++j) {
      const PixelBox& o = slots[j];
      if (s.min_row <= o.max_row && o.min_row <= s.max_row && s.min_col <= o.max_col &&
          o.min_col <= s.max_col)
        throw DomainError("slot rectangles overlap");
    }
    covered += s.area();
  }
  if (covered != region.area()) throw DomainError("slot rectangles do not tile the region");

  std::vector<FruitDetection> out;
  for (std::size_t si = 0; si < slots.size(); ++si) {
    const PixelBox& box = slots[si];
    if (box.width() < 3 || box.height() < 3) continue;
    Mask m = hsv_in_range(crop(hsv, box), fruit_range);
    if (exclude) m = mask_and_not(m, crop(*exclude, box));
    m = median3x3(m);
    m = erode(m, {3, 3});
    m = dilate(m, {3, 3});

    const LabeledRegions blobs = connected_components(m);
    std::vector<bool> keep(static_cast<std::size_t>(blobs.count()) + 1, false);
    for (int l = 1; l <= blobs.count(); ++l) {
      const RegionStats& st = blobs.regions[l - 1];
      keep[l] = static_cast<double>(st.area) >= params.fruit_area_min &&
                static_cast<double>(st.bbox.area()) >= params.fruit_bbox_area_min;
    }
    Mask kept(m.width(), m.height());
    for (std::size_t i = 0; i < m.size(); ++i) kept.pixels()[i] = keep[blobs.labels.pixels()[i]];

    const Mask cores_mask = threshold(distance_transform_normalized(kept), params.dt_threshold);
    const LabeledRegions cores = connected_components(cores_mask);
    // Cores lie inside kept blobs; record each core's enclosing blob.
    std::vector<int> parent_of(static_cast<std::size_t>(cores.count()) + 1, 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (const int l = cores.labels.pixels()[i]) parent_of[l] = blobs.labels.pixels()[i];
    }
    for (int l = 1; l <= cores.count(); ++l) {
      const RegionStats& core = cores.regions[l - 1];
      if (static_cast<double>(core.area) <= params.dt_core_area_min) continue;
      const int parent = parent_of[l];
      const RegionStats& blob = blobs.regions[parent - 1];
      FruitDetection d;
      d.centroid_row = core.centroid_row + box.min_row;
      d.centroid_col = core.centroid_col + box.min_col;
      d.area = blob.area;
      d.core_area = core.area;
      d.bbox = {blob.bbox.min_row + box.min_row, blob.bbox.min_col + box.min_col,
                blob.bbox.max_row + box.min_row, blob.bbox.max_col + box.min_col};
      d.slot = static_cast<Slot>(std::min<std::size_t>(si, 2));
      out.push_back(d);
    }
  }
  return out;
}

int BedObservation::total() const {
  int n = 0;
  for (const auto& s : slots) n += static_cast<int>(s.size());
  return n;
}

std::vector<FruitDetection> BedObservation::detections() const {
  std::vector<FruitDetection> all;
  for (const auto& s : slots) all.insert(all.end(), s.begin(), s.end());
  return all;
}

BedObservation analyze_frame(const Frame& frame, PlantType plant, const BedPose& bed,
                             const ColorProfile& profile, const DetectorParams& raw_params) {
  if (!frame.tag) throw DomainError("frame carries no capture tag");
  BedObservation obs;
  obs.bed_index = frame.tag->bed_index;
  obs.side = frame.tag->side;

  const DetectorParams params = raw_params.scaled_to(frame.rgb.width(), frame.rgb.height());
  const HsvImage hsv = rgb_to_hsv(frame.rgb);
  const std::vector<BedRegion> regions = segment_beds(hsv, frame.depth, profile, params);

  // The tagged bed is the one straddling the optical centre.
  const int center_row = static_cast<int>(frame.camera.intrinsics.cy);
  const int center_col = static_cast<int>(frame.camera.intrinsics.cx);
  const BedRegion* chosen = nullptr;
  for (const BedRegion& r : regions) {
    if (r.bbox.contains(center_row, center_col) && (!chosen || r.area > chosen->area)) chosen = &r;
  }
  if (!chosen) {
    obs.missing = true;
    return obs;
  }
  obs.bed_bbox = chosen->bbox;

  // Binary fusion: propellers and anything beyond the depth gate never count.
  Mask exclude = propeller_mask(hsv, profile);
  for (std::size_t i = 0; i < exclude.size(); ++i) {
    if (!(frame.depth.pixels()[i] <= params.depth_gate)) exclude.pixels()[i] = 1;
  }

  const auto slots = slot_partition(chosen->bbox);
  const auto detections =
      count_fruits_in_region(hsv, chosen->bbox, slots, profile.fruit(plant), params, &exclude);

  const CameraModel& cam = frame.camera;
  for (FruitDetection d : detections) {
    const int row = std::clamp(static_cast<int>(std::lround(d.centroid_row)), 0, frame.depth.height() - 1);
    const int col = std::clamp(static_cast<int>(std::lround(d.centroid_col)), 0, frame.depth.width() - 1);
    const Vec3 dir = cam.ray_direction(d.centroid_col + 0.5, d.centroid_row + 0.5);
    const double range = frame.depth(row, col);
    Vec3 centre;
    if (std::isfinite(range)) {
      // Push the visible surface point back by the apparent fruit radius.
      const bool shared = [&] {
        int n = 0;
        for (const FruitDetection& o : detections) n += o.bbox == d.bbox;
        return n > 1;
      }();
      const double r_px = shared ? std::sqrt(d.core_area / std::numbers::pi) / (1.0 - std::min(params.dt_threshold, 0.9))
                                 : std::sqrt(d.area / std::numbers::pi);
      const double r_m = r_px * range / cam.intrinsics.focal;
      centre = cam.pose.position + dir * (range + r_m);
    } else {
      // No depth: intersect the ray with the bed mid-plane.
      const double denom = dot(dir, bed.normal());
      const double t = std::abs(denom) > 1e-9 ? dot(bed.center - cam.pose.position, bed.normal()) / denom : 0.0;
      centre = cam.pose.position + dir * t;
    }
    d.local = to_viewer_local(cam, bed, centre);
    obs.slots[static_cast<std::size_t>(d.slot)].push_back(d);
  }
  return obs;
}

RgbImage annotate(const Frame& frame, const BedObservation& obs) {
  RgbImage out = frame.rgb;
  auto draw_box = [&](const PixelBox& b, Rgb8 color) {
    for (int c = b.min_col; c <= b.max_col; ++c) {
      if (out.in_bounds(b.min_row, c)) out(b.min_row, c) = color;
      if (out.in_bounds(b.max_row, c)) out(b.max_row, c) = color;
    }
    for (int r = b.min_row; r <= b.max_row; ++r) {
      if (out.in_bounds(r, b.min_col)) out(r, b.min_col) = color;
      if (out.in_bounds(r, b.max_col)) out(r, b.max_col) = color;
    }
  };
  if (obs.bed_bbox) {
    draw_box(*obs.bed_bbox, {0, 255, 255});
    for (const PixelBox& s : slot_partition(*obs.bed_bbox)) draw_box(s, {0, 160, 255});
  }
  for (const FruitDetection& d : obs.detections()) {
    draw_box(d.bbox, {255, 0, 255});
    const int r = static_cast<int>(std::lround(d.centroid_row));
    const int c = static_cast<int>(std::lround(d.centroid_col));
    for (int k = -2; k <= 2; ++k) {
      if (out.in_bounds(r + k, c)) out(r + k, c) = {255, 255, 0};
      if (out.in_bounds(r, c + k)) out(r, c + k) = {255, 255, 0};
    }
  }
  return out;
}

DetectorConfig load_detector_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open detector config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  DetectorConfig cfg;
  try {
    const Json j = Json::parse(ss.str());
    // Either a bare detector section or a full config with a "detector" key.
    const Json& d = j.contains("detector") ? j.at("detector") : j;
    read_optional(d, "profile", cfg.profile);
    read_optional(d, "params", cfg.params);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed detector config: ") + e.what());
  }
  validate(cfg.profile);
  validate(cfg.params);
  return cfg;
}

}  // namespace orchard
