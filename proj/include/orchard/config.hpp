#pragma once

#include <optional>
#include <string>

#include "orchard/detector.hpp"
#include "orchard/planner.hpp"
#include "orchard/render.hpp"
#include "orchard/scene.hpp"

namespace orchard {

struct Config {
  SceneConfig scene;
  CameraIntrinsics camera;
  bool propellers = true;
  DetectorConfig detector;
  double match_radius = 0.07;  // two-side fusion, meters
  PlannerConfig planner;
  double t_base = 100.0;
  double d_base = 150.0;
};

/// Throws ConfigError on the first invalid field.
void validate(const Config& config);

/// Missing keys keep their defaults. Throws ConfigError on malformed JSON.
Config config_from_json(const std::string& text);
std::string config_to_json(const Config& config);

Config load_config(const std::string& path);

/// Reads $ORCHARD_CONFIG when set and non-empty, else returns defaults.
Config load_default_config();

}  // namespace orchard
