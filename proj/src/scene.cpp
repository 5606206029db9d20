#include "orchard/scene.hpp"

#include <fstream>
#include <sstream>

#include "orchard/errors.hpp"
#include "orchard/random.hpp"
#include "orchard/serialization.hpp"

namespace orchard {

namespace {

constexpr double kFoliageThickness = 0.004;  // normal semi-axis of leaf blobs
constexpr int kFoliageCols = 3;
constexpr int kFoliageRows = 4;
constexpr int kPlacementAttempts = 200;

int bed_count(const LayoutConfig& l) { return l.rows * l.beds_per_row; }

/// Lateral interval [lo, hi] of slot `s` relative to the bed center.
std::pair<double, double> slot_interval(const LayoutConfig& l, int s) {
  const double w = l.bed_width / 3.0;
  const double lo = -l.bed_width / 2.0 + s * w;
  return {lo, lo + w};
}

Vec3 from_bed_local(const BedPose& pose, double lateral, double normal, double vertical) {
  return pose.center + pose.tangent() * lateral + pose.normal() * normal + Vec3{0, 0, vertical};
}

Vec3 to_bed_local(const BedPose& pose, const Vec3& p) {
  const Vec3 d = p - pose.center;
  return {dot(d, pose.tangent()), dot(d, pose.normal()), d.z};
}

Plant generate_plant(Rng& rng, const LayoutConfig& l, const FruitConfig& fc, const BedPose& pose,
                     int slot) {
  Plant plant;
  const auto [slot_lo, slot_hi] = slot_interval(l, slot);
  const double face_lo = -l.bed_width / 2.0;
  const double face_hi = l.bed_width / 2.0;
  const double bottom = -l.bed_height / 2.0;
  const double top = l.bed_height / 2.0;

  plant.board.center = from_bed_local(pose, (slot_lo + slot_hi) / 2.0, 0.0,
                                      bottom + l.planter_height / 2.0);
  plant.board.half_width = (slot_hi - slot_lo) / 2.0;
  plant.board.half_height = l.planter_height / 2.0;

  // Foliage: jittered grid of leaf blobs over the zone above the planter.
  const double zone_lo = bottom + l.planter_height;
  const double zone_hi = top - l.post_width;
  const double cell_w = (slot_hi - slot_lo) / kFoliageCols;
  const double cell_h = (zone_hi - zone_lo) / kFoliageRows;
  for (int r = 0; r < kFoliageRows; ++r) {
    for (int c = 0; c < kFoliageCols; ++c) {
      double lat = slot_lo + (c + 0.5) * cell_w + rng.uniform(-0.15, 0.15) * cell_w;
      double ver = zone_lo + (r + 0.5) * cell_h + rng.uniform(-0.15, 0.15) * cell_h;
      double a = cell_w * rng.uniform(0.65, 0.8);
      double b = cell_h * rng.uniform(0.65, 0.8);
      // Leaves stay inside the face so the white frame bounds the bed.
      a = std::min({a, lat - face_lo, face_hi - lat});
      b = std::min({b, ver - bottom, top - ver});
      plant.foliage.push_back({from_bed_local(pose, lat, 0.0, ver), {a, kFoliageThickness, b}});
    }
  }

  const int n = rng.uniform_int(fc.min_per_plant, fc.max_per_plant);
  struct Placed {
    double lat, ver, r;
  };
  std::vector<Placed> placed;
  for (int i = 0; i < n; ++i) {
    const double r = rng.uniform(fc.radius_min, fc.radius_max);
    bool both = !rng.bernoulli(fc.one_side_probability);
    bool only_a = !both && rng.bernoulli(0.5);
    const double lat_lo = slot_lo + fc.slot_margin + r + (slot == 0 ? l.post_width : 0.0);
    const double lat_hi = slot_hi - fc.slot_margin - r - (slot == 2 ? l.post_width : 0.0);
    const double ver_lo = zone_lo + r + 0.02;
    const double ver_hi = zone_hi - r - 0.02;
    if (lat_lo > lat_hi || ver_lo > ver_hi) continue;
    for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
      const double lat = rng.uniform(lat_lo, lat_hi);
      const double ver = rng.uniform(ver_lo, ver_hi);
      bool clear = true;
      for (const Placed& p : placed) {
        const double d = std::hypot(lat - p.lat, ver - p.ver);
        if (d < r + p.r + fc.min_gap) {
          clear = false;
          break;
        }
      }
      if (!clear) continue;
      placed.push_back({lat, ver, r});
      // One-sided fruits hang wholly on their side of the leaf curtain.
      const double offset = both ? 0.0 : (only_a ? -(r + 0.01) : (r + 0.01));
      Fruit f;
      f.center = from_bed_local(pose, lat, offset, ver);
      f.radius = r;
      f.visible_a = both || only_a;
      f.visible_b = both || !only_a;
      plant.fruits.push_back(f);
      break;
    }
  }
  return plant;
}

}  // namespace

int Bed::fruit_count() const {
  int n = 0;
  for (const Plant& p : plants) n += static_cast<int>(p.fruits.size());
  return n;
}

const Bed& SceneSpec::bed(int index) const {
  if (index < 1 || index > static_cast<int>(beds.size()))
    throw DomainError("bed index " + std::to_string(index) + " outside 1.." +
                      std::to_string(beds.size()));
  return beds[static_cast<std::size_t>(index - 1)];
}

Aabb SceneSpec::bed_box(int index) const {
  const Bed& b = bed(index);
  const LayoutConfig& l = config.layout;
  const Vec3 t = b.pose.tangent() * (l.bed_width / 2.0);
  const Vec3 n = b.pose.normal() * (l.bed_depth / 2.0);
  const double hx = std::abs(t.x) + std::abs(n.x);
  const double hy = std::abs(t.y) + std::abs(n.y);
  return {{b.pose.center.x - hx, b.pose.center.y - hy, 0.0},
          {b.pose.center.x + hx, b.pose.center.y + hy, b.pose.center.z + l.bed_height / 2.0}};
}

std::vector<Aabb> SceneSpec::bed_boxes() const {
  std::vector<Aabb> out;
  for (const Bed& b : beds) out.push_back(bed_box(b.index));
  return out;
}

Aabb default_bounds(const LayoutConfig& l) {
  const double length = 2.0 * l.end_margin + l.beds_per_row * l.bed_width +
                        (l.beds_per_row - 1) * l.bed_gap;
  const double width = l.rows * l.bed_depth + (l.rows + 1) * l.aisle_width;
  return {{0.0, 0.0, 0.0}, {length, width, l.ceiling}};
}

BedPose bed_pose(const LayoutConfig& l, int index) {
  const int row = (index - 1) / l.beds_per_row;
  const int col = (index - 1) % l.beds_per_row;
  BedPose p;
  p.center = {l.end_margin + l.bed_width / 2.0 + col * (l.bed_width + l.bed_gap),
              l.aisle_width + l.bed_depth / 2.0 + row * (l.bed_depth + l.aisle_width),
              l.base_height + l.bed_height / 2.0};
  p.yaw = 0.0;
  return p;
}

void validate(const SceneConfig& config) {
  const LayoutConfig& l = config.layout;
  if (l.rows < 1 || l.beds_per_row < 1 || bed_count(l) != kBedCount)
    throw ConfigError("layout must hold exactly 27 beds (rows x beds_per_row)");
  if (l.bed_width <= 0 || l.bed_height <= 0 || l.bed_depth <= 0 || l.aisle_width <= 0 ||
      l.base_height < 0 || l.bed_gap < 0 || l.end_margin < 0 || l.post_width < 0 ||
      l.planter_height < 0 || l.planter_height + l.post_width >= l.bed_height)
    throw ConfigError("layout dimensions out of range");
  const FruitConfig& f = config.fruits;
  if (f.min_per_plant < 0 || f.max_per_plant < f.min_per_plant || f.radius_min <= 0 ||
      f.radius_max < f.radius_min || f.one_side_probability < 0 || f.one_side_probability > 1 ||
      f.min_gap < 0 || f.slot_margin < 0)
    throw ConfigError("fruit parameters out of range");
  if (2.0 * f.radius_max + 0.01 > l.bed_depth / 2.0)
    throw ConfigError("fruits do not fit inside the bed depth");

  const Aabb bounds = config.bounds.value_or(default_bounds(l));
  SceneSpec probe;
  probe.config = config;
  probe.beds.resize(kBedCount);
  for (int i = 1; i <= kBedCount; ++i) {
    probe.beds[i - 1].index = i;
    probe.beds[i - 1].pose = bed_pose(l, i);
  }
  for (int i = 1; i <= kBedCount; ++i) {
    if (!bounds.contains_box(probe.bed_box(i)))
      throw ConfigError("bed " + std::to_string(i) + " does not fit inside the flight bounds");
  }
}

SceneSpec generate_scene(std::uint64_t seed, const SceneConfig& config) {
  validate(config);
  SceneSpec scene;
  scene.seed = seed;
  scene.config = config;
  scene.bounds = config.bounds.value_or(default_bounds(config.layout));
  Rng rng(seed);
  for (int index = 1; index <= kBedCount; ++index) {
    Bed bed;
    bed.index = index;
    bed.pose = bed_pose(config.layout, index);
    bed.plant_type = static_cast<PlantType>(rng.uniform_int(0, kPlantTypeCount - 1));
    for (int s = 0; s < 3; ++s)
      bed.plants[s] = generate_plant(rng, config.layout, config.fruits, bed.pose, s);
    for (const Plant& p : bed.plants) {
      for (const Fruit& f : p.fruits) {
        bed.count_a += f.visible_a;
        bed.count_b += f.visible_b;
      }
    }
    scene.beds.push_back(std::move(bed));
  }
  return scene;
}

void validate(const SceneSpec& scene) {
  const LayoutConfig& l = scene.config.layout;
  if (scene.beds.size() != static_cast<std::size_t>(kBedCount))
    throw DomainError("scene must contain exactly 27 beds");
  for (std::size_t i = 0; i < scene.beds.size(); ++i) {
    const Bed& b = scene.beds[i];
    if (b.index != static_cast<int>(i) + 1) throw DomainError("bed indices must be 1..27 in order");
    if (!scene.bounds.contains_box(scene.bed_box(b.index)))
      throw DomainError("bed " + std::to_string(b.index) + " outside bounds");
    for (std::size_t j = 0; j < i; ++j) {
      if (scene.bed_box(b.index).overlaps(scene.bed_box(scene.beds[j].index)))
        throw DomainError("beds " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                          " overlap");
    }
    int count_a = 0, count_b = 0;
    for (int s = 0; s < 3; ++s) {
      const auto [lo, hi] = slot_interval(l, s);
      for (const Fruit& f : b.plants[s].fruits) {
        const Vec3 local = to_bed_local(b.pose, f.center);
        const double eps = 1e-9;
        if (local.x < lo - eps || local.x > hi + eps || std::abs(local.y) > l.bed_depth / 2 + eps ||
            std::abs(local.z) > l.bed_height / 2 + eps)
          throw DomainError("fruit outside its plant volume in bed " + std::to_string(b.index));
        if (!f.visible_a && !f.visible_b)
          throw DomainError("fruit visible from neither side in bed " + std::to_string(b.index));
        if (f.radius <= 0) throw DomainError("non-positive fruit radius");
        count_a += f.visible_a;
        count_b += f.visible_b;
      }
    }
    if (count_a != b.count_a || count_b != b.count_b)
      throw DomainError("recorded side counts disagree with placements in bed " +
                        std::to_string(b.index));
  }
}

int ground_truth_count(const SceneSpec& scene, const Mission& mission) {
  int total = 0;
  for (int index : mission.beds) {
    if (index < 1 || index > kBedCount)
      throw DomainError("bed index " + std::to_string(index) + " outside 1..27");
  }
  validate(mission);
  for (int index : mission.beds) {
    const Bed& b = scene.bed(index);
    if (b.plant_type == mission.plant) total += b.fruit_count();
  }
  return total;
}

// ---------------------------------------------------------------- JSON

void to_json(Json& j, const Vec3& v) { j = Json::array({v.x, v.y, v.z}); }
void from_json(const Json& j, Vec3& v) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element array");
  v = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}
void to_json(Json& j, const Aabb& b) { j = Json{{"lo", b.lo}, {"hi", b.hi}}; }
void from_json(const Json& j, Aabb& b) {
  j.at("lo").get_to(b.lo);
  j.at("hi").get_to(b.hi);
}

void to_json(Json& j, const LayoutConfig& c) {
  j = Json{{"rows", c.rows},
           {"beds_per_row", c.beds_per_row},
           {"bed_width", c.bed_width},
           {"bed_height", c.bed_height},
           {"bed_depth", c.bed_depth},
           {"bed_gap", c.bed_gap},
           {"aisle_width", c.aisle_width},
           {"base_height", c.base_height},
           {"end_margin", c.end_margin},
           {"ceiling", c.ceiling},
           {"post_width", c.post_width},
           {"planter_height", c.planter_height}};
}
void from_json(const Json& j, LayoutConfig& c) {
  read_optional(j, "rows", c.rows);
  read_optional(j, "beds_per_row", c.beds_per_row);
  read_optional(j, "bed_width", c.bed_width);
  read_optional(j, "bed_height", c.bed_height);
  read_optional(j, "bed_depth", c.bed_depth);
  read_optional(j, "bed_gap", c.bed_gap);
  read_optional(j, "aisle_width", c.aisle_width);
  read_optional(j, "base_height", c.base_height);
  read_optional(j, "end_margin", c.end_margin);
  read_optional(j, "ceiling", c.ceiling);
  read_optional(j, "post_width", c.post_width);
  read_optional(j, "planter_height", c.planter_height);
}

void to_json(Json& j, const FruitConfig& c) {
  j = Json{{"min_per_plant", c.min_per_plant},
           {"max_per_plant", c.max_per_plant},
           {"radius_min", c.radius_min},
           {"radius_max", c.radius_max},
           {"one_side_probability", c.one_side_probability},
           {"min_gap", c.min_gap},
           {"slot_margin", c.slot_margin}};
}
void from_json(const Json& j, FruitConfig& c) {
  read_optional(j, "min_per_plant", c.min_per_plant);
  read_optional(j, "max_per_plant", c.max_per_plant);
  read_optional(j, "radius_min", c.radius_min);
  read_optional(j, "radius_max", c.radius_max);
  read_optional(j, "one_side_probability", c.one_side_probability);
  read_optional(j, "min_gap", c.min_gap);
  read_optional(j, "slot_margin", c.slot_margin);
}

void to_json(Json& j, const SceneConfig& c) {
  j = Json{{"layout", c.layout}, {"fruits", c.fruits}};
  if (c.bounds) j["bounds"] = *c.bounds;
}
void from_json(const Json& j, SceneConfig& c) {
  read_optional(j, "layout", c.layout);
  read_optional(j, "fruits", c.fruits);
  if (auto it = j.find("bounds"); it != j.end() && !it->is_null()) c.bounds = it->get<Aabb>();
}

std::string scene_to_json(const SceneSpec& scene) {
  Json j;
  j["seed"] = scene.seed;
  j["config"] = scene.config;
  j["bounds"] = scene.bounds;
  Json beds = Json::array();
  for (const Bed& b : scene.beds) {
    Json jb;
    jb["index"] = b.index;
    jb["plant_type"] = std::string(plant_name(b.plant_type));
    jb["pose"] = Json{{"center", b.pose.center}, {"yaw", b.pose.yaw}};
    jb["side_counts"] = Json{{"A", b.count_a}, {"B", b.count_b}};
    Json plants = Json::array();
    for (const Plant& p : b.plants) {
      Json jp;
      jp["board"] = Json{{"center", p.board.center},
                         {"half_width", p.board.half_width},
                         {"half_height", p.board.half_height}};
      Json foliage = Json::array();
      for (const FoliageBlob& f : p.foliage)
        foliage.push_back(Json{{"center", f.center}, {"semi_axes", f.semi_axes}});
      jp["foliage"] = std::move(foliage);
      Json fruits = Json::array();
      for (const Fruit& f : p.fruits) {
        Json sides = Json::array();
        if (f.visible_a) sides.push_back("A");
        if (f.visible_b) sides.push_back("B");
        fruits.push_back(Json{{"center", f.center}, {"radius", f.radius}, {"visible_sides", sides}});
      }
      jp["fruits"] = std::move(fruits);
      plants.push_back(std::move(jp));
    }
    jb["plants"] = std::move(plants);
    beds.push_back(std::move(jb));
  }
  j["beds"] = std::move(beds);
  return j.dump(1) + "\n";
}

SceneSpec scene_from_json(const std::string& text) {
  SceneSpec scene;
  try {
    const Json j = Json::parse(text);
    scene.seed = j.at("seed").get<std::uint64_t>();
    j.at("config").get_to(scene.config);
    j.at("bounds").get_to(scene.bounds);
    for (const Json& jb : j.at("beds")) {
      Bed b;
      b.index = jb.at("index").get<int>();
      const auto type = plant_from_name(jb.at("plant_type").get<std::string>());
      if (!type) throw ConfigError("unknown plant type in scene file");
      b.plant_type = *type;
      jb.at("pose").at("center").get_to(b.pose.center);
      b.pose.yaw = jb.at("pose").at("yaw").get<double>();
      b.count_a = jb.at("side_counts").at("A").get<int>();
      b.count_b = jb.at("side_counts").at("B").get<int>();
      const Json& plants = jb.at("plants");
      if (plants.size() != 3) throw ConfigError("every bed needs exactly 3 plants");
      for (std::size_t s = 0; s < 3; ++s) {
        const Json& jp = plants[s];
        Plant& p = b.plants[s];
        jp.at("board").at("center").get_to(p.board.center);
        p.board.half_width = jp.at("board").at("half_width").get<double>();
        p.board.half_height = jp.at("board").at("half_height").get<double>();
        for (const Json& jf : jp.at("foliage"))
          p.foliage.push_back({jf.at("center").get<Vec3>(), jf.at("semi_axes").get<Vec3>()});
        for (const Json& jf : jp.at("fruits")) {
          Fruit f;
          jf.at("center").get_to(f.center);
          f.radius = jf.at("radius").get<double>();
          f.visible_a = f.visible_b = false;
          for (const Json& side : jf.at("visible_sides")) {
            const std::string s = side.get<std::string>();
            if (s == "A") f.visible_a = true;
            else if (s == "B") f.visible_b = true;
            else throw ConfigError("unknown side '" + s + "'");
          }
          p.fruits.push_back(f);
        }
      }
      scene.beds.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scene JSON: ") + e.what());
  }
  validate(scene);
  return scene;
}

void save_scene(const std::string& path, const SceneSpec& scene) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << scene_to_json(scene);
}

SceneSpec load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json(ss.str());
}

}  // namespace orchard
