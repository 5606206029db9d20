#include "orchard/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "orchard/errors.hpp"
#include "orchard/serialization.hpp"

namespace orchard {

namespace {
// float fields print as e.g. 0.4000000059604645 otherwise
double tidy(float f) { return std::round(static_cast<double>(f) * 1e6) / 1e6; }
}  // namespace

void to_json(Json& j, const HsvRange& r) {
  j = Json{{"h", {tidy(r.h_lo), tidy(r.h_hi)}},
           {"s", {tidy(r.s_lo), tidy(r.s_hi)}},
           {"v", {tidy(r.v_lo), tidy(r.v_hi)}}};
}

void from_json(const Json& j, HsvRange& r) {
  auto pair = [&](const char* key, float& lo, float& hi) {
    if (auto it = j.find(key); it != j.end()) {
      if (!it->is_array() || it->size() != 2)
        throw ConfigError(std::string("HSV range '") + key + "' must be [lo, hi]");
      lo = (*it)[0].get<float>();
      hi = (*it)[1].get<float>();
    }
  };
  pair("h", r.h_lo, r.h_hi);
  pair("s", r.s_lo, r.s_hi);
  pair("v", r.v_lo, r.v_hi);
}

void to_json(Json& j, const ColorProfile& p) {
  j = Json{{"tomato", p.tomato},     {"pepper", p.pepper}, {"eggplant", p.eggplant},
           {"foliage", p.foliage},   {"board", p.board},   {"propeller", p.propeller}};
}

void from_json(const Json& j, ColorProfile& p) {
  read_optional(j, "tomato", p.tomato);
  read_optional(j, "pepper", p.pepper);
  read_optional(j, "eggplant", p.eggplant);
  read_optional(j, "foliage", p.foliage);
  read_optional(j, "board", p.board);
  read_optional(j, "propeller", p.propeller);
}

void to_json(Json& j, const DetectorParams& p) {
  j = Json{{"bed_area_min", p.bed_area_min},
           {"fruit_area_min", p.fruit_area_min},
           {"fruit_bbox_area_min", p.fruit_bbox_area_min},
           {"dt_threshold", p.dt_threshold},
           {"dt_core_area_min", p.dt_core_area_min},
           {"depth_gate", p.depth_gate},
           {"reference_width", p.reference_width},
           {"reference_height", p.reference_height}};
}

void from_json(const Json& j, DetectorParams& p) {
  read_optional(j, "bed_area_min", p.bed_area_min);
  read_optional(j, "fruit_area_min", p.fruit_area_min);
  read_optional(j, "fruit_bbox_area_min", p.fruit_bbox_area_min);
  read_optional(j, "dt_threshold", p.dt_threshold);
  read_optional(j, "dt_core_area_min", p.dt_core_area_min);
  read_optional(j, "depth_gate", p.depth_gate);
  read_optional(j, "reference_width", p.reference_width);
  read_optional(j, "reference_height", p.reference_height);
}

void to_json(Json& j, const PlannerConfig& c) {
  j = Json{{"standoff", c.standoff},
           {"grid_resolution", c.grid_resolution},
           {"drone_radius", c.drone_radius},
           {"safety_margin", c.safety_margin},
           {"v_max", c.v_max},
           {"a_max", c.a_max},
           {"dwell", c.dwell},
           {"nodes_per_segment", c.nodes_per_segment},
           {"start", c.start},
           {"start_yaw", c.start_yaw}};
}

void from_json(const Json& j, PlannerConfig& c) {
  read_optional(j, "standoff", c.standoff);
  read_optional(j, "grid_resolution", c.grid_resolution);
  read_optional(j, "drone_radius", c.drone_radius);
  read_optional(j, "safety_margin", c.safety_margin);
  read_optional(j, "v_max", c.v_max);
  read_optional(j, "a_max", c.a_max);
  read_optional(j, "dwell", c.dwell);
  read_optional(j, "nodes_per_segment", c.nodes_per_segment);
  read_optional(j, "start", c.start);
  read_optional(j, "start_yaw", c.start_yaw);
}

void to_json(Json& j, const CameraIntrinsics& c) {
  j = Json{{"width", c.width}, {"height", c.height}, {"focal", c.focal}, {"cx", c.cx}, {"cy", c.cy}};
}

void from_json(const Json& j, CameraIntrinsics& c) {
  read_optional(j, "width", c.width);
  read_optional(j, "height", c.height);
  read_optional(j, "focal", c.focal);
  read_optional(j, "cx", c.cx);
  read_optional(j, "cy", c.cy);
}

void validate(const Config& c) {
  validate(c.scene);
  if (c.camera.width < 16 || c.camera.height < 16) throw ConfigError("camera image is too small");
  if (!(c.camera.focal > 0.0)) throw ConfigError("camera focal length must be positive");
  validate(c.detector.profile);
  validate(c.detector.params);
  if (!(c.match_radius >= 0.0)) throw ConfigError("match_radius must be >= 0");
  validate(c.planner);
  if (!(c.t_base > 0.0)) throw ConfigError("t_base must be positive");
  if (!(c.d_base > 0.0)) throw ConfigError("d_base must be positive");
}

Config config_from_json(const std::string& text) {
  Config c;
  try {
    const Json j = Json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    read_optional(j, "scene", c.scene);
    read_optional(j, "camera", c.camera);
    read_optional(j, "propellers", c.propellers);
    if (auto it = j.find("detector"); it != j.end()) {
      read_optional(*it, "profile", c.detector.profile);
      read_optional(*it, "params", c.detector.params);
    }
    read_optional(j, "match_radius", c.match_radius);
    read_optional(j, "planner", c.planner);
    read_optional(j, "t_base", c.t_base);
    read_optional(j, "d_base", c.d_base);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

std::string config_to_json(const Config& c) {
  Json j;
  j["scene"] = c.scene;
  j["camera"] = c.camera;
  j["propellers"] = c.propellers;
  j["detector"] = Json{{"profile", c.detector.profile}, {"params", c.detector.params}};
  j["match_radius"] = c.match_radius;
  j["planner"] = c.planner;
  j["t_base"] = c.t_base;
  j["d_base"] = c.d_base;
  return j.dump(2) + "\n";
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

Config load_default_config() {
  const char* env = std::getenv("ORCHARD_CONFIG");
  if (env && *env) return load_config(env);
  Config c;
  validate(c);
  return c;
}

}  // namespace orchard
