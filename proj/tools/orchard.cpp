// Command-line front end: scene generation, rendering, detection, planning,
// single missions, batches and scoring.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "orchard/config.hpp"
#include "orchard/detector.hpp"
#include "orchard/errors.hpp"
#include "orchard/fusion.hpp"
#include "orchard/harness.hpp"
#include "orchard/image_io.hpp"
#include "orchard/planner.hpp"
#include "orchard/render.hpp"
#include "orchard/scene.hpp"
#include "orchard/scorer.hpp"

using namespace orchard;

namespace {

struct Globals {
  std::string config_path;
  std::string detector_config;
  std::optional<double> t_base;
  std::optional<double> d_base;
};

Config resolve_config(const Globals& g) {
  Config c = g.config_path.empty() ? load_default_config() : load_config(g.config_path);
  if (!g.detector_config.empty()) c.detector = load_detector_config(g.detector_config);
  if (g.t_base) c.t_base = *g.t_base;
  if (g.d_base) c.d_base = *g.d_base;
  validate(c);
  return c;
}

CameraPose parse_pose(const std::string& text) {
  std::istringstream in(text);
  CameraPose p;
  if (!(in >> p.position.x >> p.position.y >> p.position.z >> p.yaw))
    throw ParseError("pose must be \"x y z yaw\"", 0);
  std::string extra;
  if (in >> extra) throw ParseError("unexpected text after pose", static_cast<std::size_t>(in.tellg()) - extra.size());
  return p;
}

void print_score(const ScoreReport& s) {
  std::printf("p_f %.6f\np_t %.6f\np_d %.6f\np_c %.6f\np   %.6f\n", s.p_f, s.p_t, s.p_d, s.p_c, s.p);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greenhouse fruit-counting drone simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config_path, "JSON config (default: $ORCHARD_CONFIG)");
  app.add_option("--detector-config", g.detector_config, "JSON detector profile/params override");
  app.add_option("--t-base", g.t_base, "reference mission time [s]");
  app.add_option("--d-base", g.d_base, "reference mission distance [m]");

  // gen-scene
  auto* gen = app.add_subcommand("gen-scene", "generate a random scene");
  std::uint64_t seed = 0;
  std::string out_path;
  gen->add_option("--seed", seed)->required();
  gen->add_option("-o,--output", out_path)->required();

  // render
  auto* render = app.add_subcommand("render", "render one RGB-D frame");
  std::string scene_path, pose_text, depth_path;
  render->add_option("--scene", scene_path)->required();
  render->add_option("--pose", pose_text, "\"x y z yaw\"")->required();
  render->add_option("-o,--output", out_path, "PPM output")->required();
  render->add_option("--depth", depth_path, "PFM depth output");

  // detect
  auto* detect = app.add_subcommand("detect", "fly a mission and print per-bed detections");
  std::string mission_text, annotate_dir;
  detect->add_option("--scene", scene_path)->required();
  detect->add_option("--mission", mission_text)->required();
  detect->add_option("--dump-annotated", annotate_dir, "write annotated PPMs here");

  // plan
  auto* plan = app.add_subcommand("plan", "plan a mission and export the trajectory");
  plan->add_option("--scene", scene_path)->required();
  plan->add_option("--mission", mission_text)->required();
  plan->add_option("-o,--output", out_path, "trajectory CSV")->required();

  // run
  auto* run = app.add_subcommand("run", "run one mission end to end");
  run->add_option("--scene", scene_path)->required();
  run->add_option("--mission", mission_text)->required();

  // batch
  auto* batch = app.add_subcommand("batch", "run random missions and aggregate");
  std::size_t n = 0;
  int workers = 0;
  std::size_t best_k = 0;
  std::string hist_dir;
  batch->add_option("-n", n)->required()->check(CLI::PositiveNumber);
  batch->add_option("--seed", seed)->required();
  batch->add_option("-o,--output", out_path, "per-mission CSV")->required();
  batch->add_option("--workers", workers, "0 = hardware concurrency");
  batch->add_option("--best-k", best_k, "also report the mean of the k best missions");
  batch->add_option("--histograms", hist_dir, "directory for histogram CSVs");

  // score
  auto* score = app.add_subcommand("score", "evaluate the mission metric");
  ScoreInputs in;
  score->add_option("--cr", in.c_r)->required();
  score->add_option("--ct", in.c_t)->required();
  score->add_option("--t", in.t_m)->required();
  score->add_option("--d", in.d_m)->required();
  score->add_option("--k", in.k)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Config config = resolve_config(g);

    if (*score) {
      in.t_b = config.t_base;
      in.d_b = config.d_base;
      print_score(compute_score(in));
      return 0;
    }

    if (*batch) {
      const auto reports = run_batch(n, seed, config, workers);
      {
        auto f = open_out(out_path);
        write_report_csv(f, reports, config);
      }
      const BatchSummary summary = summarize(reports);
      write_summary(std::cout, summary);
      if (best_k > 0) std::printf("best %zu mean %.2f\n", best_k, best_k_mean(reports, best_k));
      if (!hist_dir.empty()) write_histograms(hist_dir, summary);
      return 0;
    }

    if (*gen) {
      save_scene(out_path, generate_scene(seed, config.scene));
      return 0;
    }

    if (*render) {
      const SceneSpec scene = load_scene(scene_path);
      RenderOptions options;
      options.propellers = config.propellers;
      const Frame frame = render_frame(scene, CameraModel{config.camera, parse_pose(pose_text)}, options);
      write_ppm(out_path, frame.rgb);
      if (!depth_path.empty()) write_pfm(depth_path, frame.depth);
      return 0;
    }

    const SceneSpec scene = load_scene(scene_path);
    validate(scene);

    if (*plan) {
      const Mission mission = parse_mission(mission_text);
      const FlightPlan fp = plan_flight(mission, scene, config.planner);
      auto f = open_out(out_path);
      write_trajectory_csv(f, fp.trajectory);
      const FlightResult fr = simulate_flight(fp.trajectory, scene, config.planner);
      std::printf("waypoints %zu\nduration  %.3f s\nlength    %.3f m\ncollisions %d\n",
                  fp.waypoints.size(), fr.t_m, fr.d_m, fr.collisions);
      return 0;
    }

    if (*detect) {
      const Mission mission = parse_mission(mission_text);
      const FlightPlan fp = plan_flight(mission, scene, config.planner);
      RenderOptions options;
      options.propellers = config.propellers;
      const auto primitives = scene_primitives(scene, options);
      if (!annotate_dir.empty()) std::filesystem::create_directories(annotate_dir);
      std::printf("bed,side,missing,count\n");
      for (const auto& w : fp.trajectory.capture_windows) {
        Frame frame = render_primitives(primitives, CameraModel{config.camera, {w.position, w.yaw}}, options);
        frame.tag = w.tag;
        const BedObservation obs = analyze_frame(frame, mission.plant, scene.bed(w.tag.bed_index).pose,
                                                 config.detector.profile, config.detector.params);
        std::printf("%d,%s,%d,%d\n", obs.bed_index, std::string(side_name(obs.side)).c_str(),
                    obs.missing ? 1 : 0, obs.total());
        if (!annotate_dir.empty()) {
          const std::string name = "bed" + std::to_string(obs.bed_index) + "_" +
                                   std::string(side_name(obs.side)) + ".ppm";
          write_ppm((std::filesystem::path(annotate_dir) / name).string(), annotate(frame, obs));
        }
      }
      return 0;
    }

    if (*run) {
      const Mission mission = parse_mission(mission_text);
      const MissionReport r = run_mission(scene, mission, config);
      if (r.failed) {
        std::fprintf(stderr, "mission failed: %s\n", r.diagnostic.c_str());
        return 2;
      }
      std::printf("mission   %s\n", to_string(mission).c_str());
      for (const auto& b : r.beds)
        std::printf("bed %2d    %d (pairs %zu, single %zu%s)\n", b.bed_index, b.count,
                    b.matched_pairs.size(), b.singletons.size(), b.partial ? ", partial" : "");
      std::printf("reported  %d\ntrue      %d\nt_m       %.3f\nd_m       %.3f\nk         %d\n",
                  r.reported_count, r.true_count, r.flight.t_m, r.flight.d_m, r.flight.collisions);
      print_score(r.score);
      return 0;
    }
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const PlanningError& e) {
    std::fprintf(stderr, "planning error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
