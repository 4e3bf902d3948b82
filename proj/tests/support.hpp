#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "covsim/covsim.hpp"

namespace covsim::support {

inline const std::filesystem::path kDataDir = COVSIM_DATA_DIR;

inline const InputBundle& oklahoma() {
  static const InputBundle bundle = load_bundle(kDataDir / "counties.csv", kDataDir / "adjacency.csv", std::nullopt,
                                                kDataDir / "geometry.geojson");
  return bundle;
}

inline ScenarioConfig fixture_config(const std::string& name) { return load_config(kDataDir / name).config; }

inline constexpr const char* kOkc = "40109";
inline constexpr const char* kTulsa = "40143";

/// Rows of a CSV file keyed by column name.
inline std::vector<std::map<std::string, std::string>> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  const csv::Table t = csv::read(in);
  std::vector<std::map<std::string, std::string>> out;
  for (const auto& row : t.rows) {
    std::map<std::string, std::string> m;
    for (std::size_t k = 0; k < row.cells.size() && k < t.header->cells.size(); ++k) m[t.header->cells[k]] = row.cells[k];
    out.push_back(std::move(m));
  }
  return out;
}

inline Persons statewide(const SimulationResult& r, Field f, Day day) {
  Persons sum = 0;
  for (std::size_t c = 0; c < r.county_count(); ++c) sum += r.at(f, day, c);
  return sum;
}

inline Persons new_sick(const SimulationResult& r, Day day, std::size_t c) {
  Persons n = 0;
  for (auto g : kAgeGroups) n += r.at(new_sick_field(g), day, c);
  return n;
}

/// First day a county records any infection, or -1.
inline Day first_infection_day(const SimulationResult& r, std::string_view fips) {
  const auto c = r.county_index(fips).value();
  for (Day d = 0; d < r.horizon(); ++d)
    if (r.at(Field::cumulative_sick, d, c) > 0) return d;
  return -1;
}

/// First day a county's usable beds are all taken, or -1.
inline Day saturation_day(const SimulationResult& r, std::string_view fips) {
  const auto c = r.county_index(fips).value();
  if (r.bed_capacity[c] <= 0) return -1;
  for (Day d = 0; d < r.horizon(); ++d)
    if (r.at(Field::beds_filled, d, c) >= r.bed_capacity[c]) return d;
  return -1;
}

struct RandomWorld {
  InputBundle inputs;
  ScenarioConfig config;
};

/// A small connected county graph with a random but valid configuration.
inline RandomWorld random_world(std::mt19937_64& rng, int max_counties = 10, Day max_horizon = 120) {
  auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto integer = [&](long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng); };

  RandomWorld w;
  const int n = static_cast<int>(integer(1, max_counties));
  for (int i = 0; i < n; ++i) {
    County c;
    c.fips = "c" + std::to_string(i);
    c.name = "County " + std::to_string(i);
    c.population = {integer(0, 20000), integer(1, 60000), integer(0, 15000)};
    c.density = static_cast<DensityClass>(integer(0, 2));
    c.total_beds = integer(0, 400);
    c.has_airport = integer(0, 3) == 0;
    w.inputs.counties.push_back(c);
    if (i > 0) w.inputs.adjacency.push_back({c.fips, "c" + std::to_string(integer(0, i - 1))});
  }
  for (int extra = 0; extra < n / 2; ++extra) {
    const auto a = integer(0, n - 1), b = integer(0, n - 1);
    if (a != b) w.inputs.adjacency.push_back({"c" + std::to_string(a), "c" + std::to_string(b)});
  }

  ScenarioConfig& cfg = w.config;
  auto& d = cfg.disease;
  d.r0 = uniform(0.5, 5.0);
  d.shedding_period = static_cast<int>(integer(2, 10));
  d.incubation_period = static_cast<int>(integer(1, 8));
  d.time_to_death = d.incubation_period + static_cast<int>(integer(0, 20));
  d.recovery_time = d.incubation_period + static_cast<int>(integer(1, 20));
  d.mortality_rate = uniform(0.0, 0.1);
  d.hospitalization_rate = uniform(0.0, 0.3);
  d.days_in_hospital = static_cast<int>(integer(1, 20));
  d.excess_mortality_multiplier = uniform(1.0, 5.0);
  d.horizon = static_cast<Day>(integer(20, max_horizon));
  d.initial_infectious_fraction = std::pow(10.0, uniform(-5.0, -2.0));
  for (auto g : kAgeGroups)
    cfg.profiles[g] = {uniform(0.2, 1.0), uniform(0.1, 3.0), uniform(0.1, 5.0)};
  cfg.spread.spread_rate = uniform(0.5, 300.0);
  cfg.spread.threshold = uniform(0.2, 2.0);
  cfg.spread.air_enabled = integer(0, 1) == 1;
  cfg.spread.air_weight = uniform(0.0, 2.0);
  cfg.occupancy_fraction = uniform(0.0, 1.0);
  for (auto k : kMeasureKinds)
    if (integer(0, 1) == 1) cfg.actions.push_back({k, static_cast<Day>(integer(0, d.horizon)), static_cast<Day>(integer(0, 14)), uniform(0.01, 0.9)});
  const int seeds = static_cast<int>(integer(1, 3));
  for (int s = 0; s < seeds; ++s)
    cfg.seeds.push_back({"c" + std::to_string(integer(0, n - 1)), static_cast<Day>(integer(0, d.horizon / 3)), integer(1, 50)});
  return w;
}

}  // namespace covsim::support
