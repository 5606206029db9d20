#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "orchard/config.hpp"
#include "orchard/fusion.hpp"
#include "orchard/mission.hpp"
#include "orchard/planner.hpp"
#include "orchard/scene.hpp"
#include "orchard/scorer.hpp"

namespace orchard {

struct MissionReport {
  std::size_t index = 0;
  std::uint64_t scene_seed = 0;
  Mission mission;
  int reported_count = 0;
  int true_count = 0;
  std::vector<BedCount> beds;
  FlightResult flight;
  ScoreReport score;
  bool missing_beds = false;
  bool counting_error = false;
  bool collisions = false;
  bool failed = false;  // planning error; the score is all zeros
  std::string diagnostic;

  bool clean() const { return !missing_beds && !counting_error && !collisions && !failed; }
};

/// Plans, flies, captures one frame per capture window, counts and scores.
/// A PlanningError does not propagate: the report is marked failed.
MissionReport run_mission(const SceneSpec& scene, const Mission& mission, const Config& config);

struct BatchSummary {
  std::size_t n_missions = 0;
  double mean_p_f = 0.0;
  double mean_p_t = 0.0;
  double mean_p_d = 0.0;
  double mean_p_c = 0.0;
  double mean_p = 0.0;
  double mean_t_m = 0.0;
  double mean_d_m = 0.0;
  std::size_t clean = 0;
  std::size_t missing_beds = 0;
  std::size_t collisions = 0;
  std::size_t counting_errors = 0;
  std::size_t failed = 0;
  std::array<std::size_t, kBedCount> bed_visits{};      // missions containing bed i+1
  std::array<std::size_t, kBedCount> mission_length{};  // missions with i+1 beds
  std::array<std::size_t, 3> plant_types{};
};

BatchSummary summarize(const std::vector<MissionReport>& reports);

/// Mission i uses scene seed derive_seed(master, 2i) and mission seed
/// derive_seed(master, 2i + 1). Output order is mission order for any
/// worker count; workers <= 0 picks the hardware concurrency.
std::vector<MissionReport> run_batch(std::size_t n, std::uint64_t master_seed, const Config& config,
                                     int workers = 0);

/// Mean total of the k highest-scoring missions (all of them when k exceeds n).
double best_k_mean(const std::vector<MissionReport>& reports, std::size_t k);

void write_report_csv(std::ostream& out, const std::vector<MissionReport>& reports,
                      const Config& config);
void write_summary(std::ostream& out, const BatchSummary& summary);
/// bed_visits.csv, mission_length.csv and plant_types.csv inside `dir`.
void write_histograms(const std::string& dir, const BatchSummary& summary);

}  // namespace orchard
