#include "orchard/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "orchard/detector.hpp"
#include "orchard/errors.hpp"
#include "orchard/random.hpp"
#include "orchard/render.hpp"

namespace orchard {

MissionReport run_mission(const SceneSpec& scene, const Mission& mission, const Config& config) {
  validate(mission);
  MissionReport r;
  r.scene_seed = scene.seed;
  r.mission = mission;
  r.true_count = ground_truth_count(scene, mission);

  FlightPlan plan;
  try {
    plan = plan_flight(mission, scene, config.planner);
  } catch (const PlanningError& e) {
    r.failed = true;
    r.diagnostic = e.what();
    r.counting_error = true;
    return r;
  }
  r.flight = simulate_flight(plan.trajectory, scene, config.planner);
  r.collisions = r.flight.collisions > 0;

  RenderOptions options;
  options.propellers = config.propellers;
  const auto primitives = scene_primitives(scene, options);

  std::map<int, std::array<std::optional<BedObservation>, 2>> seen;
  for (const auto& w : plan.trajectory.capture_windows) {
    CameraModel camera{config.camera, {w.position, w.yaw}};
    Frame frame = render_primitives(primitives, camera, options);
    frame.tag = w.tag;
    const Bed& bed = scene.bed(w.tag.bed_index);
    seen[w.tag.bed_index][static_cast<int>(w.tag.side)] =
        analyze_frame(frame, mission.plant, bed.pose, config.detector.profile, config.detector.params);
  }

  for (int index : mission.beds) {
    auto& sides = seen[index];
    for (int s = 0; s < 2; ++s) {
      if (!sides[s]) {
        BedObservation missing;
        missing.bed_index = index;
        missing.side = static_cast<Side>(s);
        missing.missing = true;
        sides[s] = missing;
      }
      if (sides[s]->missing) r.missing_beds = true;
    }
    BedCount count = merge_bed_sides(*sides[0], *sides[1], config.match_radius);
    r.reported_count += count.count;
    r.beds.push_back(std::move(count));
  }

  r.counting_error = r.reported_count != r.true_count;
  ScoreInputs in;
  in.c_r = r.reported_count;
  in.c_t = r.true_count;
  in.t_m = r.flight.t_m;
  in.d_m = r.flight.d_m;
  in.k = r.flight.collisions;
  in.t_b = config.t_base;
  in.d_b = config.d_base;
  r.score = compute_score(in);
  return r;
}

BatchSummary summarize(const std::vector<MissionReport>& reports) {
  BatchSummary s;
  s.n_missions = reports.size();
  for (const auto& r : reports) {
    s.mean_p_f += r.score.p_f;
    s.mean_p_t += r.score.p_t;
    s.mean_p_d += r.score.p_d;
    s.mean_p_c += r.score.p_c;
    s.mean_t_m += r.flight.t_m;
    s.mean_d_m += r.flight.d_m;
    s.clean += r.clean();
    s.missing_beds += r.missing_beds;
    s.collisions += r.collisions;
    s.counting_errors += r.counting_error;
    s.failed += r.failed;
    for (int b : r.mission.beds) ++s.bed_visits[static_cast<std::size_t>(b - 1)];
    ++s.mission_length[r.mission.beds.size() - 1];
    ++s.plant_types[static_cast<std::size_t>(r.mission.plant)];
  }
  if (s.n_missions > 0) {
    const double n = static_cast<double>(s.n_missions);
    s.mean_p_f /= n;
    s.mean_p_t /= n;
    s.mean_p_d /= n;
    s.mean_p_c /= n;
    s.mean_t_m /= n;
    s.mean_d_m /= n;
  }
  s.mean_p = s.mean_p_f + s.mean_p_t + s.mean_p_d - s.mean_p_c;
  return s;
}

std::vector<MissionReport> run_batch(std::size_t n, std::uint64_t master_seed, const Config& config,
                                     int workers) {
  if (n == 0) throw DomainError("batch needs at least one mission");
  validate(config);
  std::vector<MissionReport> reports(n);
  std::size_t threads = workers > 0 ? static_cast<std::size_t>(workers)
                                    : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        const SceneSpec scene = generate_scene(derive_seed(master_seed, 2 * i), config.scene);
        const Mission mission = random_mission(derive_seed(master_seed, 2 * i + 1));
        reports[i] = run_mission(scene, mission, config);
        reports[i].index = i;
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return reports;
}

double best_k_mean(const std::vector<MissionReport>& reports, std::size_t k) {
  if (k == 0) throw DomainError("best-k needs k >= 1");
  std::vector<double> totals;
  for (const auto& r : reports) totals.push_back(r.score.p);
  std::sort(totals.begin(), totals.end(), std::greater<>());
  totals.resize(std::min(k, totals.size()));
  if (totals.empty()) return 0.0;
  double sum = 0.0;
  for (double t : totals) sum += t;
  return sum / static_cast<double>(totals.size());
}

void write_report_csv(std::ostream& out, const std::vector<MissionReport>& reports,
                      const Config& config) {
  out << "index,scene_seed,plant,beds,reported,true,t_m,d_m,k,t_b,d_b,p_f,p_t,p_d,p_c,p,"
         "missing_beds,collisions,counting_error,failed\n";
  char buf[512];
  for (const auto& r : reports) {
    std::string beds;
    for (int b : r.mission.beds) beds += (beds.empty() ? "" : " ") + std::to_string(b);
    std::snprintf(buf, sizeof buf,
                  "%zu,%llu,%s,%s,%d,%d,%.6f,%.6f,%d,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d,%d,%d,%d\n",
                  r.index, static_cast<unsigned long long>(r.scene_seed),
                  plant_display_name(r.mission.plant).c_str(), beds.c_str(), r.reported_count,
                  r.true_count, r.flight.t_m, r.flight.d_m, r.flight.collisions, config.t_base,
                  config.d_base, r.score.p_f, r.score.p_t, r.score.p_d, r.score.p_c, r.score.p,
                  r.missing_beds, r.collisions, r.counting_error, r.failed);
    out << buf;
  }
}

void write_summary(std::ostream& out, const BatchSummary& s) {
  char buf[256];
  const double n = s.n_missions > 0 ? static_cast<double>(s.n_missions) : 1.0;
  std::snprintf(buf, sizeof buf, "missions      %zu\n", s.n_missions);
  out << buf;
  std::snprintf(buf, sizeof buf, "mean p_f      %.2f\nmean p_t      %.2f\nmean p_d      %.2f\n"
                "mean p_c      %.2f\nmean p        %.2f\n",
                s.mean_p_f, s.mean_p_t, s.mean_p_d, s.mean_p_c, s.mean_p);
  out << buf;
  std::snprintf(buf, sizeof buf, "mean t_m      %.2f s\nmean d_m      %.2f m\n", s.mean_t_m, s.mean_d_m);
  out << buf;
  auto line = [&](const char* name, std::size_t c) {
    std::snprintf(buf, sizeof buf, "%-13s %zu (%.2f %%)\n", name, c, 100.0 * static_cast<double>(c) / n);
    out << buf;
  };
  line("clean", s.clean);
  line("missing beds", s.missing_beds);
  line("collisions", s.collisions);
  line("count errors", s.counting_errors);
  line("failed", s.failed);
}

void write_histograms(const std::string& dir, const BatchSummary& s) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw IoError(std::string("cannot write ") + name + " in '" + dir + "'");
    return f;
  };
  {
    auto f = open("bed_visits.csv");
    f << "bed,missions\n";
    for (int i = 0; i < kBedCount; ++i) f << i + 1 << ',' << s.bed_visits[static_cast<std::size_t>(i)] << '\n';
  }
  {
    auto f = open("mission_length.csv");
    f << "beds,missions\n";
    for (int i = 0; i < kBedCount; ++i)
      f << i + 1 << ',' << s.mission_length[static_cast<std::size_t>(i)] << '\n';
  }
  {
    auto f = open("plant_types.csv");
    f << "plant,missions\n";
    for (int i = 0; i < 3; ++i)
      f << plant_display_name(static_cast<PlantType>(i)) << ',' << s.plant_types[static_cast<std::size_t>(i)] << '\n';
  }
}

}  // namespace orchard
