#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "covsim/disease_model.hpp"
#include "covsim/error.hpp"
#include "covsim/interventions.hpp"
#include "covsim/rounding.hpp"
#include "covsim/spatial_spread.hpp"
#include "covsim/types.hpp"

namespace covsim {

struct SpreadSettings {
  double spread_rate = 240.0;
  double air_weight = 1.0;
  double threshold = 1.0;
  bool air_enabled = true;
  DensityModifiers density_modifiers;

  bool operator==(const SpreadSettings&) const = default;
};

/// Everything needed to run a scenario against an input bundle.
struct ScenarioConfig {
  DiseaseParams disease;
  AgeGroupProfiles profiles;
  SpreadSettings spread;
  double occupancy_fraction = 0.7;
  MeasureDefaults measure_defaults;
  std::vector<DecisionAction> actions;
  std::vector<Seed> seeds;
  RoundingMode rounding = RoundingMode::half_even;
  std::uint64_t rng_seed = 0;

  bool operator==(const ScenarioConfig&) const = default;

  std::vector<Diagnostic> validate() const {
    DiagnosticSink sink;
    sink.merge(disease.validate());
    sink.merge(profiles.validate());
    if (!std::isfinite(spread.spread_rate) || spread.spread_rate < 0.0)
      sink.add("spread.spread_rate", "must be finite and >= 0");
    if (!std::isfinite(spread.air_weight) || spread.air_weight < 0.0)
      sink.add("spread.air_weight", "must be finite and >= 0");
    if (!std::isfinite(spread.threshold) || spread.threshold <= 0.0) sink.add("spread.threshold", "must be > 0");
    for (auto d : {DensityClass::rural, DensityClass::small, DensityClass::urban})
      if (!std::isfinite(spread.density_modifiers[d]) || spread.density_modifiers[d] <= 0.0)
        sink.add("spread.density_modifiers." + std::string(to_string(d)), "must be finite and > 0");
    if (!std::isfinite(occupancy_fraction) || occupancy_fraction < 0.0 || occupancy_fraction > 1.0)
      sink.add("hospital.occupancy_fraction", "must be in [0, 1]");
    for (auto k : kMeasureKinds) {
      const std::string base = "measures." + std::string(to_string(k)) + ".";
      sink.merge(measure_defaults.make(k, 0).validate(base));
    }
    sink.merge(validate_timeline(actions));
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const std::string base = "seeds[" + std::to_string(i) + "].";
      if (seeds[i].fips.empty()) sink.add(base + "fips", "must not be empty");
      if (seeds[i].day < 0) sink.add(base + "day", "must be >= 0");
      if (seeds[i].initial_cases < 1) sink.add(base + "cases", "must be >= 1");
    }
    return sink.items();
  }
};

/// County data plus edges, as loaded from disk.
struct InputBundle {
  std::vector<County> counties;
  std::vector<FipsEdge> adjacency;
  std::optional<std::vector<FipsEdge>> air_routes;
  std::optional<std::string> geometry;  // GeoJSON passthrough for the UI
};

inline SpreadNetwork make_network(const InputBundle& inputs, const SpreadSettings& spread) {
  std::optional<std::span<const FipsEdge>> air;
  if (inputs.air_routes) air = std::span<const FipsEdge>(*inputs.air_routes);
  return build_network(inputs.counties, inputs.adjacency, air, spread.spread_rate, spread.density_modifiers,
                       spread.air_weight);
}

/// Per county-day record columns, in export order.
enum class Field : std::uint8_t {
  new_sick_0_17,
  new_sick_18_64,
  new_sick_65plus,
  susceptible_0_17,
  susceptible_18_64,
  susceptible_65plus,
  cumulative_sick,
  active_sick,
  recovered,
  new_admissions,
  hospital_demand,
  beds_filled,
  unmet_demand,
  new_deaths,
  cumulative_deaths,
};

inline constexpr std::size_t kFieldCount = 15;

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames{
    "new_sick_0_17",  "new_sick_18_64",  "new_sick_65plus", "susceptible_0_17", "susceptible_18_64",
    "susceptible_65plus", "cumulative_sick", "active_sick", "recovered", "new_admissions",
    "hospital_demand", "beds_filled", "unmet_demand", "new_deaths", "cumulative_deaths"};

inline constexpr std::string_view to_string(Field f) { return kFieldNames[static_cast<std::size_t>(f)]; }

inline constexpr Field new_sick_field(AgeGroup g) {
  return static_cast<Field>(static_cast<std::size_t>(Field::new_sick_0_17) + index_of(g));
}
inline constexpr Field susceptible_field(AgeGroup g) {
  return static_cast<Field>(static_cast<std::size_t>(Field::susceptible_0_17) + index_of(g));
}

/// Immutable day x county frames stored column-wise.
class SimulationResult {
 public:
  std::string scenario_id;
  std::vector<std::string> fips;
  std::vector<Persons> population;
  std::vector<Persons> bed_capacity;  // beds usable by the simulation

  SimulationResult() = default;
  SimulationResult(std::string id, std::vector<std::string> fips_, std::vector<Persons> population_,
                   std::vector<Persons> capacity_, Day horizon)
      : scenario_id(std::move(id)),
        fips(std::move(fips_)),
        population(std::move(population_)),
        bed_capacity(std::move(capacity_)),
        horizon_(horizon) {
    for (auto& col : columns_) col.assign(static_cast<std::size_t>(horizon_) * fips.size(), 0);
  }

  Day horizon() const noexcept { return horizon_; }
  std::size_t county_count() const noexcept { return fips.size(); }

  Persons at(Field f, Day day, std::size_t county) const { return columns_[static_cast<std::size_t>(f)][slot(day, county)]; }
  Persons& at(Field f, Day day, std::size_t county) { return columns_[static_cast<std::size_t>(f)][slot(day, county)]; }

  std::optional<std::size_t> county_index(std::string_view id) const {
    auto it = std::find(fips.begin(), fips.end(), id);
    if (it == fips.end()) return std::nullopt;
    return static_cast<std::size_t>(it - fips.begin());
  }

  bool operator==(const SimulationResult&) const = default;

 private:
  std::size_t slot(Day day, std::size_t county) const {
    return static_cast<std::size_t>(day) * fips.size() + county;
  }

  Day horizon_ = 0;
  std::array<std::vector<Persons>, kFieldCount> columns_;
};

namespace detail {

inline void record_frame(SimulationResult& r, Day day, std::span<const CountyState> states) {
  for (std::size_t c = 0; c < states.size(); ++c) {
    const auto& s = states[c];
    for (auto g : kAgeGroups) {
      r.at(new_sick_field(g), day, c) = s.today.new_sick[index_of(g)];
      r.at(susceptible_field(g), day, c) = s.susceptible[index_of(g)];
    }
    r.at(Field::cumulative_sick, day, c) = total(s.cumulative_sick);
    r.at(Field::active_sick, day, c) = s.active_sick;
    r.at(Field::recovered, day, c) = total(s.recovered);
    r.at(Field::new_admissions, day, c) = s.today.new_admissions;
    r.at(Field::hospital_demand, day, c) = s.hospital_demand;
    r.at(Field::beds_filled, day, c) = s.beds_filled;
    r.at(Field::unmet_demand, day, c) = s.unmet_demand;
    r.at(Field::new_deaths, day, c) = s.today.new_deaths;
    r.at(Field::cumulative_deaths, day, c) = s.deaths_cumulative();
  }
}

}  // namespace detail

/// Runs the day loop: importation pressure, outbreak triggers, seeding,
/// the day's intervention multiplier, county steps, frame recording.
inline SimulationResult run(const ScenarioConfig& config, const SpreadNetwork& network, std::string scenario_id = {}) {
  DiagnosticSink sink;
  sink.merge(config.validate());
  sink.throw_if_any(ErrorCode::validation, "invalid scenario configuration");

  const PrevalenceCurve curve = build_prevalence_curve(config.disease);
  SeedPlan plan = seed_initial(network, config.seeds);
  std::vector<CountyState> states = std::move(plan.states);
  ImportationLedger ledger = ImportationLedger::zeros(network.size());
  Rounder round(config.rounding, config.rng_seed);

  std::vector<Persons> population, capacity;
  std::vector<std::string> ids;
  for (const auto& c : network.counties) {
    ids.push_back(c.fips);
    population.push_back(c.total_population());
    capacity.push_back(bed_capacity(c.total_beds, config.occupancy_fraction));
  }
  SimulationResult result(std::move(scenario_id), std::move(ids), std::move(population), std::move(capacity),
                          config.disease.horizon);

  for (Day day = 0; day < config.disease.horizon; ++day) {
    ledger = accumulate_pressure(network, states, config.spread.air_enabled, std::move(ledger));
    states = trigger_outbreaks(ledger, std::move(states), config.spread.threshold, day);
    for (const auto& seed : plan.seeds)
      if (seed.day == day) start_outbreak(states[seed.county], day);

    const double multiplier = combined_multiplier(config.actions, day);
    for (std::size_t c = 0; c < states.size(); ++c) {
      if (!states[c].outbreak_started) continue;
      const BedSupply beds{network.counties[c].total_beds, config.occupancy_fraction};
      states[c] = step_county(states[c], curve, config.disease, config.profiles, multiplier, beds, day, round);
    }
    for (const auto& seed : plan.seeds) {
      if (seed.day != day) continue;
      auto& s = states[seed.county];
      const GroupCounts split = split_by_population(seed.initial_cases, s.population);
      for (auto g : kAgeGroups) infect(s, g, split[index_of(g)], day, config.disease, config.profiles, round);
    }
    detail::record_frame(result, day, states);
  }
  return result;
}

enum class Metric : std::uint8_t {
  new_sick,
  cumulative_sick,
  active_sick,
  hospital_demand,
  beds_filled,
  deaths,  // cumulative
  new_deaths,
  unmet_demand,
  new_admissions,
  recovered,
};

inline constexpr std::array<Metric, 10> kMetrics{Metric::new_sick,       Metric::cumulative_sick, Metric::active_sick,
                                                 Metric::hospital_demand, Metric::beds_filled,    Metric::deaths,
                                                 Metric::new_deaths,     Metric::unmet_demand,    Metric::new_admissions,
                                                 Metric::recovered};

inline constexpr std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::new_sick: return "new_sick";
    case Metric::cumulative_sick: return "cumulative_sick";
    case Metric::active_sick: return "active_sick";
    case Metric::hospital_demand: return "hospital_demand";
    case Metric::beds_filled: return "beds_filled";
    case Metric::deaths: return "deaths";
    case Metric::new_deaths: return "new_deaths";
    case Metric::unmet_demand: return "unmet_demand";
    case Metric::new_admissions: return "new_admissions";
    case Metric::recovered: return "recovered";
  }
  return "?";
}

inline std::optional<Metric> parse_metric(std::string_view s) {
  for (auto m : kMetrics)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

inline Metric require_metric(std::string_view s) {
  if (auto m = parse_metric(s)) return *m;
  throw Error(ErrorCode::out_of_range, "unknown metric '" + std::string(s) + "'", {{"metric", "unknown metric"}});
}

inline Persons metric_value(const SimulationResult& r, Metric m, Day day, std::size_t county) {
  switch (m) {
    case Metric::new_sick: {
      Persons sum = 0;
      for (auto g : kAgeGroups) sum += r.at(new_sick_field(g), day, county);
      return sum;
    }
    case Metric::cumulative_sick: return r.at(Field::cumulative_sick, day, county);
    case Metric::active_sick: return r.at(Field::active_sick, day, county);
    case Metric::hospital_demand: return r.at(Field::hospital_demand, day, county);
    case Metric::beds_filled: return r.at(Field::beds_filled, day, county);
    case Metric::deaths: return r.at(Field::cumulative_deaths, day, county);
    case Metric::new_deaths: return r.at(Field::new_deaths, day, county);
    case Metric::unmet_demand: return r.at(Field::unmet_demand, day, county);
    case Metric::new_admissions: return r.at(Field::new_admissions, day, county);
    case Metric::recovered: return r.at(Field::recovered, day, county);
  }
  return 0;
}

struct CountySeries {
  std::string fips;
  std::vector<Persons> values;  // indexed by absolute day
};

inline std::vector<CountySeries> series(const SimulationResult& r, std::span<const std::string> county_ids,
                                        Metric metric) {
  std::vector<CountySeries> out;
  out.reserve(county_ids.size());
  for (const auto& id : county_ids) {
    auto c = r.county_index(id);
    if (!c) throw Error(ErrorCode::not_found, "unknown county " + id, {{"counties", "unknown county " + id}});
    CountySeries s{id, {}};
    s.values.reserve(static_cast<std::size_t>(r.horizon()));
    for (Day d = 0; d < r.horizon(); ++d) s.values.push_back(metric_value(r, metric, d, *c));
    out.push_back(std::move(s));
  }
  return out;
}

struct FrameEntry {
  std::string fips;
  Persons value = 0;
  double normalized = 0.0;  // value / population
};

struct MapFrame {
  Day day = 0;
  Metric metric = Metric::active_sick;
  std::vector<FrameEntry> entries;
};

inline MapFrame frame(const SimulationResult& r, Day day, Metric metric) {
  if (day < 0 || day >= r.horizon())
    throw Error(ErrorCode::out_of_range, "day " + std::to_string(day) + " outside [0, " + std::to_string(r.horizon()) + ")",
                {{"day", "out of range"}});
  MapFrame f{day, metric, {}};
  f.entries.reserve(r.county_count());
  for (std::size_t c = 0; c < r.county_count(); ++c) {
    const Persons v = metric_value(r, metric, day, c);
    const double share = r.population[c] > 0 ? static_cast<double>(v) / static_cast<double>(r.population[c]) : 0.0;
    f.entries.push_back({r.fips[c], v, share});
  }
  return f;
}

/// Statewide view of a run.
struct StateSummary {
  Day peak_sick_day = 0;
  Persons peak_sick_count = 0;
  Day outbreak_duration = 0;
  Day first_case_day = -1;   // first day with statewide new_sick > 0
  Day last_active_day = -1;  // last day with statewide active_sick >= threshold
  Persons total_sick = 0;
  Persons total_deaths = 0;
  Persons total_hospitalizations = 0;

  bool operator==(const StateSummary&) const = default;
};

/// Peak is the first day attaining the maximum statewide active_sick.
/// Duration runs from the first day with new cases through the last day
/// statewide active_sick is at least `active_threshold`.
inline StateSummary summary(const SimulationResult& r, Persons active_threshold = 1) {
  StateSummary s;
  for (Day d = 0; d < r.horizon(); ++d) {
    Persons active = 0, fresh = 0, admitted = 0;
    for (std::size_t c = 0; c < r.county_count(); ++c) {
      active += metric_value(r, Metric::active_sick, d, c);
      fresh += metric_value(r, Metric::new_sick, d, c);
      admitted += metric_value(r, Metric::new_admissions, d, c);
    }
    if (active > s.peak_sick_count) {
      s.peak_sick_count = active;
      s.peak_sick_day = d;
    }
    if (fresh > 0 && s.first_case_day < 0) s.first_case_day = d;
    if (active >= active_threshold && s.first_case_day >= 0) s.last_active_day = d;
    s.total_hospitalizations += admitted;
  }
  if (r.horizon() > 0) {
    const Day last = r.horizon() - 1;
    for (std::size_t c = 0; c < r.county_count(); ++c) {
      s.total_sick += metric_value(r, Metric::cumulative_sick, last, c);
      s.total_deaths += metric_value(r, Metric::deaths, last, c);
    }
  }
  if (s.first_case_day >= 0 && s.last_active_day >= s.first_case_day)
    s.outbreak_duration = s.last_active_day - s.first_case_day + 1;
  return s;
}

}  // namespace covsim
