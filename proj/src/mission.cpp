#include "orchard/mission.hpp"

#include <algorithm>
#include <cctype>

#include "orchard/errors.hpp"
#include "orchard/random.hpp"

namespace orchard {

std::string_view plant_name(PlantType t) {
  switch (t) {
    case PlantType::Tomato: return "tomato";
    case PlantType::Pepper: return "pepper";
    case PlantType::Eggplant: return "eggplant";
  }
  return "unknown";
}

std::string plant_display_name(PlantType t) {
  std::string s(plant_name(t));
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

std::optional<PlantType> plant_from_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (PlantType t : {PlantType::Tomato, PlantType::Pepper, PlantType::Eggplant}) {
    if (lower == plant_name(t)) return t;
  }
  return std::nullopt;
}

std::string_view side_name(Side s) { return s == Side::A ? "A" : "B"; }

namespace {

struct Token {
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= text.size()) break;
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    out.push_back({text.substr(start, i - start), start});
  }
  return out;
}

}  // namespace

Mission parse_mission(const std::string& text) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw ParseError("empty mission", 0);

  Mission m;
  const auto plant = plant_from_name(tokens[0].text);
  if (!plant) throw ParseError("unknown plant '" + tokens[0].text + "'", tokens[0].pos);
  m.plant = *plant;

  if (tokens.size() == 1) throw ParseError("mission lists no beds", text.size());

  for (std::size_t k = 1; k < tokens.size(); ++k) {
    const Token& t = tokens[k];
    if (t.text.size() > 3 ||
        !std::all_of(t.text.begin(), t.text.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw ParseError("bed index '" + t.text + "' is not an integer in 1..27", t.pos);
    const int bed = std::stoi(t.text);
    if (bed < 1 || bed > kBedCount)
      throw ParseError("bed index " + t.text + " outside 1..27", t.pos);
    if (!m.beds.empty() && bed <= m.beds.back())
      throw ParseError("bed indices must be strictly ascending", t.pos);
    m.beds.push_back(bed);
  }
  return m;
}

std::string to_string(const Mission& m) {
  std::string s = plant_display_name(m.plant);
  for (int b : m.beds) s += " " + std::to_string(b);
  return s;
}

void validate(const Mission& m) {
  if (m.beds.empty()) throw DomainError("mission must list at least one bed");
  for (std::size_t i = 0; i < m.beds.size(); ++i) {
    if (m.beds[i] < 1 || m.beds[i] > kBedCount)
      throw DomainError("bed index " + std::to_string(m.beds[i]) + " outside 1..27");
    if (i > 0 && m.beds[i] <= m.beds[i - 1])
      throw DomainError("bed indices must be strictly ascending");
  }
}

Mission random_mission(std::uint64_t seed) {
  Rng rng(seed);
  Mission m;
  m.plant = static_cast<PlantType>(rng.uniform_int(0, kPlantTypeCount - 1));
  std::uint32_t subset = 0;
  while (subset == 0) subset = static_cast<std::uint32_t>(rng.next() >> 37);  // 27 bits
  for (int b = 1; b <= kBedCount; ++b) {
    if (subset & (1u << (b - 1))) m.beds.push_back(b);
  }
  return m;
}

}  // namespace orchard
