#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "covsim/error.hpp"
#include "covsim/rounding.hpp"
#include "covsim/types.hpp"

namespace covsim {

/// Epidemiological constants driving a run. Periods are whole days.
struct DiseaseParams {
  double r0 = 3.6;
  int shedding_period = 4;
  int incubation_period = 5;
  double mortality_rate = 0.01;
  int time_to_death = 14;
  int recovery_time = 10;
  double hospitalization_rate = 0.05;
  int days_in_hospital = 10;
  double excess_mortality_multiplier = 2.0;  // applied to the unmet-demand cohort
  Day horizon = 120;
  double initial_infectious_fraction = 1e-4;

  bool operator==(const DiseaseParams&) const = default;

  std::vector<Diagnostic> validate(const std::string& prefix = "disease.") const {
    DiagnosticSink sink;
    auto rate = [&](const char* name, double v) {
      if (!std::isfinite(v) || v < 0.0 || v > 1.0) sink.add(prefix + name, "must be in [0, 1]");
    };
    auto period = [&](const char* name, long long v) {
      if (v < 1) sink.add(prefix + name, "must be at least 1 day");
    };
    if (!std::isfinite(r0) || r0 < 0.0) sink.add(prefix + "r0", "must be finite and >= 0");
    period("shedding_period", shedding_period);
    period("incubation_period", incubation_period);
    period("time_to_death", time_to_death);
    period("recovery_time", recovery_time);
    period("days_in_hospital", days_in_hospital);
    period("horizon", horizon);
    rate("mortality_rate", mortality_rate);
    rate("hospitalization_rate", hospitalization_rate);
    if (!std::isfinite(excess_mortality_multiplier) || excess_mortality_multiplier < 1.0)
      sink.add(prefix + "excess_mortality_multiplier", "must be finite and >= 1");
    if (!(initial_infectious_fraction > 0.0 && initial_infectious_fraction < 1.0))
      sink.add(prefix + "initial_infectious_fraction", "must be in (0, 1)");
    if (time_to_death < incubation_period)
      sink.add(prefix + "time_to_death", "must be >= incubation_period");
    // Extra deaths of turned-away patients are taken from their still-pending
    // recoveries, which requires recovery to come after admission.
    if (recovery_time <= incubation_period)
      sink.add(prefix + "recovery_time", "must be > incubation_period");
    return sink.items();
  }
};

/// Fraction of a county's susceptible population newly infected on each
/// local outbreak day.
struct PrevalenceCurve {
  std::vector<double> daily_incidence;

  std::size_t size() const noexcept { return daily_incidence.size(); }
  double operator[](std::size_t t) const { return daily_incidence[t]; }
};

/// Discrete-time SIR (one-day forward Euler step) on a unit population with
/// beta = r0 / shedding_period and gamma = 1 / shedding_period. Each entry is
/// the day's incidence beta * S * I, clamped so the running total never
/// exceeds the initially susceptible mass 1 - i0.
inline PrevalenceCurve build_prevalence_curve(const DiseaseParams& params) {
  if (params.horizon <= 0) throw Error(ErrorCode::empty_curve, "prevalence curve horizon must be positive");
  const double beta = params.r0 / params.shedding_period;
  const double gamma = 1.0 / params.shedding_period;
  if (!std::isfinite(beta) || !std::isfinite(gamma) || beta < 0.0 || params.shedding_period < 1)
    throw Error(ErrorCode::validation, "non-finite transmission or recovery rate",
                {{"disease.r0", "beta/gamma must be finite"}});
  const double i0 = params.initial_infectious_fraction;
  const double budget = 1.0 - i0;

  PrevalenceCurve curve;
  curve.daily_incidence.reserve(static_cast<std::size_t>(params.horizon));
  double s = budget;
  double i = i0;
  double infected = 0.0;
  for (Day t = 0; t < params.horizon; ++t) {
    double incidence = std::clamp(beta * s * i, 0.0, budget - infected);
    infected += incidence;
    curve.daily_incidence.push_back(incidence);
    const double recoveries = gamma * i;
    s -= incidence;
    i += incidence - recoveries;
  }
  return curve;
}

struct AgeGroupProfile {
  double prevalence_multiplier = 1.0;
  double hospitalization_multiplier = 1.0;
  double mortality_multiplier = 1.0;

  bool operator==(const AgeGroupProfile&) const = default;
};

/// Per-age-group multipliers on the base curve, hospitalization and mortality.
struct AgeGroupProfiles {
  // Shipping placeholders, not fitted values.
  std::array<AgeGroupProfile, kAgeGroupCount> groups{{
      {1.0, 0.2, 0.1},
      {1.0, 1.0, 1.0},
      {1.0, 3.0, 5.0},
  }};

  bool operator==(const AgeGroupProfiles&) const = default;

  const AgeGroupProfile& operator[](AgeGroup g) const { return groups[index_of(g)]; }
  AgeGroupProfile& operator[](AgeGroup g) { return groups[index_of(g)]; }

  static AgeGroupProfiles uniform() {
    AgeGroupProfiles p;
    p.groups.fill(AgeGroupProfile{});
    return p;
  }

  std::vector<Diagnostic> validate(const std::string& prefix = "age_groups.") const {
    DiagnosticSink sink;
    for (auto g : kAgeGroups) {
      const auto& p = (*this)[g];
      const std::string base = prefix + std::string(label(g)) + ".";
      auto check = [&](const char* name, double v) {
        if (!std::isfinite(v) || v < 0.0) sink.add(base + name, "must be finite and >= 0");
      };
      check("prevalence_multiplier", p.prevalence_multiplier);
      check("hospitalization_multiplier", p.hospitalization_multiplier);
      check("mortality_multiplier", p.mortality_multiplier);
    }
    return sink.items();
  }
};

/// Beds usable by the simulation: those not already taken by the background
/// occupancy. The small epsilon keeps e.g. 10 * (1 - 0.9) from flooring to 0.
inline Persons bed_capacity(Persons total_beds, double occupancy_fraction) {
  if (total_beds <= 0) return 0;
  return static_cast<Persons>(std::floor(static_cast<double>(total_beds) * (1.0 - occupancy_fraction) + 1e-9));
}

struct BedAllocation {
  Persons filled = 0;  // simulation beds occupied after admitting today's demand
  Persons unmet = 0;   // part of today's demand that found no bed

  bool operator==(const BedAllocation&) const = default;
};

inline BedAllocation allocate_beds(Persons demand, Persons total_beds, double occupancy_fraction,
                                   Persons currently_filled = 0) {
  const Persons capacity = bed_capacity(total_beds, occupancy_fraction);
  const Persons free_beds = std::max<Persons>(0, capacity - currently_filled);
  const Persons admitted = std::min(demand, free_beds);
  return {currently_filled + admitted, demand - admitted};
}

/// Events due on one absolute day.
struct PendingEvents {
  GroupCounts admissions{};
  GroupCounts deaths{};
  GroupCounts recoveries{};
  Persons discharges = 0;
};

/// Counts produced during the most recent simulated day.
struct DayTally {
  GroupCounts new_sick{};
  Persons new_admissions = 0;
  Persons new_deaths = 0;
};

struct CountyState {
  std::string fips;
  GroupCounts population{};
  bool outbreak_started = false;
  Day outbreak_start_day = -1;
  Day local_day = 0;

  GroupCounts susceptible{};
  GroupCounts cumulative_sick{};
  GroupCounts recovered{};
  GroupCounts deaths{};
  Persons active_sick = 0;

  Persons hospital_demand = 0;  // beds_filled + unmet_demand
  Persons beds_filled = 0;
  Persons unmet_demand = 0;

  DayTally today;
  std::map<Day, PendingEvents> pipeline;

  Persons deaths_cumulative() const { return total(deaths); }
  Persons total_population() const { return total(population); }
};

inline CountyState make_county_state(std::string fips, const GroupCounts& population) {
  CountyState s;
  s.fips = std::move(fips);
  s.population = population;
  s.susceptible = population;
  return s;
}

inline void start_outbreak(CountyState& state, Day absolute_day) {
  if (state.outbreak_started) return;
  state.outbreak_started = true;
  state.outbreak_start_day = absolute_day;
  state.local_day = 0;
}

/// Where a county's patients go: total beds plus background occupancy.
struct BedSupply {
  Persons total_beds = 0;
  double occupancy_fraction = 0.7;
};

namespace detail {

inline double hospitalization_fraction(const DiseaseParams& p, const AgeGroupProfile& g) {
  return std::clamp(p.hospitalization_rate * g.hospitalization_multiplier, 0.0, 1.0);
}

inline double mortality_fraction(const DiseaseParams& p, const AgeGroupProfile& g) {
  return std::clamp(p.mortality_rate * g.mortality_multiplier, 0.0, 1.0);
}

// Bed priority when capacity runs short: oldest first.
inline constexpr std::array<AgeGroup, kAgeGroupCount> kBedPriority{
    AgeGroup::senior, AgeGroup::adult, AgeGroup::under_18};

inline void execute_due_events(CountyState& s, Day day, const DiseaseParams& params,
                               const AgeGroupProfiles& profiles, const BedSupply& beds, Rounder& round) {
  PendingEvents due;
  if (auto node = s.pipeline.extract(day); !node.empty()) due = node.mapped();

  s.beds_filled -= due.discharges;
  for (std::size_t g = 0; g < kAgeGroupCount; ++g) {
    s.recovered[g] += due.recoveries[g];
    s.deaths[g] += due.deaths[g];
    s.active_sick -= due.recoveries[g] + due.deaths[g];
    s.today.new_deaths += due.deaths[g];
  }

  const Persons demand = total(due.admissions);
  const BedAllocation alloc = allocate_beds(demand, beds.total_beds, beds.occupancy_fraction, s.beds_filled);
  Persons free_for_today = alloc.filled - s.beds_filled;
  s.beds_filled = alloc.filled;
  if (free_for_today > 0) s.pipeline[day + params.days_in_hospital].discharges += free_for_today;

  const Day recovery_day = day + (params.recovery_time - params.incubation_period);
  const Day death_day = day + (params.time_to_death - params.incubation_period);
  for (AgeGroup group : kBedPriority) {
    const std::size_t g = index_of(group);
    const Persons admitted = std::min(due.admissions[g], free_for_today);
    free_for_today -= admitted;
    const Persons unmet = due.admissions[g] - admitted;
    if (unmet == 0) continue;

    // Turned-away patients die at the excess rate instead of the base rate;
    // the difference converts pending recoveries of the cohort into deaths.
    const double p = mortality_fraction(params, profiles[group]);
    const double excess = std::min(1.0, p * params.excess_mortality_multiplier) - p;
    Persons extra = round(static_cast<double>(unmet) * excess);
    auto rec = s.pipeline.find(recovery_day);
    const Persons pending = rec == s.pipeline.end() ? 0 : rec->second.recoveries[g];
    extra = std::min(extra, pending);
    if (extra == 0) continue;
    rec->second.recoveries[g] -= extra;
    if (death_day == day) {
      s.deaths[g] += extra;
      s.active_sick -= extra;
      s.today.new_deaths += extra;
    } else {
      s.pipeline[death_day].deaths[g] += extra;
    }
  }
  s.unmet_demand = alloc.unmet;
  s.hospital_demand = s.beds_filled + s.unmet_demand;
  s.today.new_admissions = demand;
}

}  // namespace detail

/// Moves `cases` persons of `group` from susceptible to sick on `absolute_day`
/// and schedules their admission, death and recovery events.
inline void infect(CountyState& s, AgeGroup group, Persons cases, Day absolute_day, const DiseaseParams& params,
                   const AgeGroupProfiles& profiles, Rounder& round) {
  const std::size_t g = index_of(group);
  cases = std::min(cases, s.susceptible[g]);
  if (cases <= 0) return;
  s.susceptible[g] -= cases;
  s.cumulative_sick[g] += cases;
  s.active_sick += cases;
  s.today.new_sick[g] += cases;

  const double n = static_cast<double>(cases);
  const Persons hospitalized = std::min(cases, round(n * detail::hospitalization_fraction(params, profiles[group])));
  const Persons dying = std::min(cases, round(n * detail::mortality_fraction(params, profiles[group])));
  if (hospitalized > 0) s.pipeline[absolute_day + params.incubation_period].admissions[g] += hospitalized;
  if (dying > 0) s.pipeline[absolute_day + params.time_to_death].deaths[g] += dying;
  if (cases - dying > 0) s.pipeline[absolute_day + params.recovery_time].recoveries[g] += cases - dying;
}

/// Real-valued new infections per group before rounding.
inline std::array<double, kAgeGroupCount> expected_new_infections(const CountyState& s, const PrevalenceCurve& curve,
                                                                  const AgeGroupProfiles& profiles,
                                                                  double intervention_multiplier) {
  std::array<double, kAgeGroupCount> out{};
  if (static_cast<std::size_t>(s.local_day) >= curve.size()) return out;
  const double incidence = curve[static_cast<std::size_t>(s.local_day)];
  for (auto g : kAgeGroups)
    out[index_of(g)] = static_cast<double>(s.susceptible[index_of(g)]) * incidence *
                       profiles[g].prevalence_multiplier * intervention_multiplier;
  return out;
}

/// Advances one started county by one day and returns the new state.
inline CountyState step_county(const CountyState& state, const PrevalenceCurve& curve, const DiseaseParams& params,
                               const AgeGroupProfiles& profiles, double intervention_multiplier,
                               const BedSupply& beds, Day absolute_day, Rounder& round) {
  if (!state.outbreak_started)
    throw Error(ErrorCode::validation, "county " + state.fips + " has no started outbreak");
  if (state.local_day < 0 || static_cast<std::size_t>(state.local_day) >= curve.size())
    throw Error(ErrorCode::horizon_exceeded, "county " + state.fips + " stepped past the prevalence curve (local day " +
                                                 std::to_string(state.local_day) + ")");
  CountyState next = state;
  next.today = {};
  const auto expected = expected_new_infections(state, curve, profiles, intervention_multiplier);
  for (auto g : kAgeGroups) infect(next, g, round(expected[index_of(g)]), absolute_day, params, profiles, round);
  detail::execute_due_events(next, absolute_day, params, profiles, beds, round);
  ++next.local_day;
  return next;
}

}  // namespace covsim
