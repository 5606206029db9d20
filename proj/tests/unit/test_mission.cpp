#include <doctest.h>

#include <array>

#include "orchard/errors.hpp"
#include "orchard/mission.hpp"
#include "orchard/random.hpp"

using namespace orchard;

TEST_CASE("scheduler text form") {
  const Mission m = parse_mission("Tomato 2 3 8 14 25");
  CHECK(m.plant == PlantType::Tomato);
  CHECK(m.beds == std::vector<int>{2, 3, 8, 14, 25});
  CHECK(to_string(m) == "Tomato 2 3 8 14 25");

  const Mission p = parse_mission("Pepper 27");
  CHECK(p.plant == PlantType::Pepper);
  CHECK(p.beds == std::vector<int>{27});

  CHECK(parse_mission("  eggPLANT\t1   9 ").plant == PlantType::Eggplant);
}

TEST_CASE("parse errors carry the offending position") {
  auto position_of = [](const std::string& text) -> std::size_t {
    try {
      parse_mission(text);
    } catch (const ParseError& e) {
      return e.position();
    }
    FAIL("no ParseError for '" << text << "'");
    return 0;
  };
  CHECK(position_of("Tomato 5 3") == 9);
  CHECK(position_of("Banana 1") == 0);
  CHECK(position_of("Tomato 0") == 7);
  CHECK(position_of("Tomato 28") == 7);
  CHECK(position_of("Tomato 3 x") == 9);
  CHECK(position_of("Tomato 3 3") == 9);
  CHECK(position_of("Tomato") == 6);
  CHECK(position_of("") == 0);
}

TEST_CASE("text form round trips for random missions") {
  for (std::uint64_t s = 0; s < 500; ++s) {
    const Mission m = random_mission(s);
    CHECK_NOTHROW(validate(m));
    CHECK(parse_mission(to_string(m)) == m);
  }
}

TEST_CASE("random missions are deterministic") {
  CHECK(random_mission(42) == random_mission(42));
  CHECK_FALSE(random_mission(42) == random_mission(43));
}

TEST_CASE("scheduler marginals") {
  constexpr int n = 10000;
  std::array<int, kBedCount> beds{};
  std::array<int, 3> plants{};
  for (int s = 0; s < n; ++s) {
    const Mission m = random_mission(derive_seed(99, s));
    ++plants[static_cast<int>(m.plant)];
    for (int b : m.beds) ++beds[b - 1];
  }
  for (int c : beds) CHECK(std::abs(c / double(n) - 0.5) <= 0.02);
  for (int c : plants) CHECK(std::abs(c / double(n) - 1.0 / 3.0) <= 0.015);
}

TEST_CASE("validate rejects broken missions") {
  CHECK_THROWS_AS(validate(Mission{PlantType::Tomato, {}}), DomainError);
  CHECK_THROWS_AS(validate(Mission{PlantType::Tomato, {3, 2}}), DomainError);
  CHECK_THROWS_AS(validate(Mission{PlantType::Tomato, {0}}), DomainError);
  CHECK_THROWS_AS(validate(Mission{PlantType::Tomato, {28}}), DomainError);
}
