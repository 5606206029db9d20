#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orchard/imgproc.hpp"
#include "orchard/render.hpp"
#include "orchard/scene.hpp"

namespace orchard {

/// HSV classes used by the pipeline. Chromatic classes require S >= 0.4 and V >= 0.3.
struct ColorProfile {
  HsvRange tomato{350.f, 10.f, 0.4f, 1.f, 0.3f, 1.f};
  HsvRange pepper{45.f, 65.f, 0.4f, 1.f, 0.3f, 1.f};
  HsvRange eggplant{265.f, 290.f, 0.4f, 1.f, 0.3f, 1.f};
  HsvRange foliage{90.f, 150.f, 0.4f, 1.f, 0.3f, 1.f};
  HsvRange board{0.f, 360.f, 0.f, 0.1f, 0.85f, 1.f};
  HsvRange propeller{0.f, 360.f, 0.f, 1.f, 0.f, 0.12f};

  const HsvRange& fruit(PlantType t) const;
};

/// Throws ConfigError if a range is malformed or two fruit hue ranges overlap.
void validate(const ColorProfile& profile);

/// Pixel thresholds are given at the reference resolution and rescaled by
/// pixel count with scaled_to().
struct DetectorParams {
  double bed_area_min = 100000.0;
  double fruit_area_min = 100.0;
  double fruit_bbox_area_min = 200.0;
  double dt_threshold = 0.7;
  double dt_core_area_min = 10.0;
  double depth_gate = 2.5;  // meters
  int reference_width = 640;
  int reference_height = 480;

  DetectorParams scaled_to(int width, int height) const;
};

void validate(const DetectorParams& params);

enum class Slot { Left = 0, Centre = 1, Right = 2 };

struct FruitDetection {
  double centroid_row = 0.0;  // of the distance-transform core
  double centroid_col = 0.0;
  long area = 0;       // of the enclosing filtered component
  long core_area = 0;
  PixelBox bbox;       // of the enclosing filtered component
  Slot slot = Slot::Left;
  /// Fruit centre relative to the bed centre in the viewer's frame:
  /// x = lateral (viewer's right), y = along the view direction, z = up. Meters.
  Vec3 local;
};

struct BedRegion {
  Mask mask;  // full-frame mask of this region only
  PixelBox bbox;
  long area = 0;
};

/// White/green union, 1x25 and 25x1 dilations, 3x3 median, depth gate, then
/// components larger than bed_area_min. `params` must already be scaled.
std::vector<BedRegion> segment_beds(const HsvImage& hsv, const DepthImage& depth,
                                    const ColorProfile& profile, const DetectorParams& params);
std::vector<BedRegion> segment_beds(const Frame& frame, const ColorProfile& profile,
                                    const DetectorParams& params);

/// Propeller-coloured pixels dilated 3x3.
Mask propeller_mask(const HsvImage& hsv, const ColorProfile& profile);
Mask propeller_mask(const Frame& frame, const ColorProfile& profile);

/// Vertical thirds of a bed box: left, centre, right.
std::array<PixelBox, 3> slot_partition(const PixelBox& region);

/// Per-slot fruit counting cascade. `exclude`, if given, removes pixels from
/// every fruit mask before filtering. `params` must already be scaled.
/// Throws DomainError when the slots do not tile the region or leave the image.
std::vector<FruitDetection> count_fruits_in_region(const HsvImage& hsv, const PixelBox& region,
                                                   std::span<const PixelBox> slots,
                                                   const HsvRange& fruit_range,
                                                   const DetectorParams& params,
                                                   const Mask* exclude = nullptr);

struct BedObservation {
  int bed_index = 0;
  Side side = Side::A;
  bool missing = false;  // no valid bed region where one was expected
  std::optional<PixelBox> bed_bbox;
  std::array<std::vector<FruitDetection>, 3> slots;

  int total() const;
  std::vector<FruitDetection> detections() const;
};

/// Full per-frame pipeline for a frame captured at a tagged waypoint.
/// `bed` is the known pose of the tagged bed, used for bed-local coordinates.
/// Unscaled params; scaling to the frame resolution happens here.
BedObservation analyze_frame(const Frame& frame, PlantType plant, const BedPose& bed,
                             const ColorProfile& profile, const DetectorParams& params);

/// Copy of the RGB frame with the bed box and fruit boxes drawn in.
RgbImage annotate(const Frame& frame, const BedObservation& obs);

struct DetectorConfig {
  ColorProfile profile;
  DetectorParams params;
};

DetectorConfig load_detector_config(const std::string& path);

}  // namespace orchard
