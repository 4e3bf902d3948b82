#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "covsim/disease_model.hpp"
#include "covsim/error.hpp"
#include "covsim/types.hpp"

namespace covsim {

enum class DensityClass : std::uint8_t { rural = 0, small = 1, urban = 2 };

inline constexpr std::string_view to_string(DensityClass d) {
  switch (d) {
    case DensityClass::rural: return "rural";
    case DensityClass::small: return "small";
    case DensityClass::urban: return "urban";
  }
  return "?";
}

inline std::optional<DensityClass> parse_density_class(std::string_view s) {
  for (auto d : {DensityClass::rural, DensityClass::small, DensityClass::urban})
    if (to_string(d) == s) return d;
  return std::nullopt;
}

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const GeoPoint&) const = default;
};

struct County {
  std::string fips;
  std::string name;
  GroupCounts population{};
  DensityClass density = DensityClass::rural;
  Persons total_beds = 0;
  GeoPoint centroid;
  bool has_airport = false;

  Persons total_population() const { return total(population); }
  bool operator==(const County&) const = default;
};

/// Contact-rate multiplier per density class (placeholders, configurable).
struct DensityModifiers {
  std::array<double, 3> values{1.0, 1.2, 1.5};

  bool operator==(const DensityModifiers&) const = default;

  double operator[](DensityClass d) const { return values[static_cast<std::size_t>(d)]; }
  double& operator[](DensityClass d) { return values[static_cast<std::size_t>(d)]; }
};

/// Undirected edge by county identifier, as read from input files.
struct FipsEdge {
  std::string a;
  std::string b;
  bool operator==(const FipsEdge&) const = default;
};

/// Undirected edge by county index, a < b.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  auto operator<=>(const Edge&) const = default;
};

class SpreadNetwork {
 public:
  std::vector<County> counties;
  std::vector<Edge> adjacency;
  std::vector<Edge> air_routes;
  double spread_rate = 0.0;
  double air_weight = 1.0;
  DensityModifiers density_modifiers;

  std::size_t size() const noexcept { return counties.size(); }

  std::optional<std::size_t> index_of(std::string_view fips) const {
    auto it = index_.find(std::string(fips));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Neighbor indices in ascending order.
  const std::vector<std::size_t>& adjacent(std::size_t i) const { return adjacent_[i]; }
  const std::vector<std::size_t>& air_linked(std::size_t i) const { return air_linked_[i]; }

  /// Rebuilds the lookup tables from `counties`, `adjacency` and `air_routes`.
  void reindex() {
    index_.clear();
    for (std::size_t i = 0; i < counties.size(); ++i) index_.emplace(counties[i].fips, i);
    adjacent_.assign(counties.size(), {});
    air_linked_.assign(counties.size(), {});
    for (const auto& e : adjacency) {
      adjacent_[e.a].push_back(e.b);
      adjacent_[e.b].push_back(e.a);
    }
    for (const auto& e : air_routes) {
      air_linked_[e.a].push_back(e.b);
      air_linked_[e.b].push_back(e.a);
    }
    for (auto& v : adjacent_) std::sort(v.begin(), v.end());
    for (auto& v : air_linked_) std::sort(v.begin(), v.end());
  }

 private:
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adjacent_;
  std::vector<std::vector<std::size_t>> air_linked_;
};

/// Validates counties and edges and builds the indexed network.
/// Without explicit air edges every pair of airport counties is linked.
inline SpreadNetwork build_network(std::vector<County> counties, std::span<const FipsEdge> adjacency_edges,
                                   std::optional<std::span<const FipsEdge>> air_edges, double spread_rate,
                                   const DensityModifiers& density_modifiers, double air_weight = 1.0) {
  SpreadNetwork net;
  DiagnosticSink sink;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < counties.size(); ++i) {
    const auto& c = counties[i];
    if (!index.emplace(c.fips, i).second) sink.add("counties", "duplicate fips " + c.fips);
    if (c.total_population() <= 0) sink.add("counties", "county " + c.fips + " has no population");
    for (Persons p : c.population)
      if (p < 0) sink.add("counties", "county " + c.fips + " has a negative group population");
    if (c.total_beds < 0) sink.add("counties", "county " + c.fips + " has negative total_beds");
  }
  if (!std::isfinite(spread_rate) || spread_rate < 0.0) sink.add("spread.spread_rate", "must be finite and >= 0");
  if (!std::isfinite(air_weight) || air_weight < 0.0) sink.add("spread.air_weight", "must be finite and >= 0");
  for (auto d : {DensityClass::rural, DensityClass::small, DensityClass::urban})
    if (!std::isfinite(density_modifiers[d]) || density_modifiers[d] <= 0.0)
      sink.add("spread.density_modifiers." + std::string(to_string(d)), "must be finite and > 0");

  auto resolve = [&](std::span<const FipsEdge> edges, const char* what, bool airports_only) {
    std::set<Edge> unique;
    for (const auto& e : edges) {
      auto ia = index.find(e.a);
      auto ib = index.find(e.b);
      if (ia == index.end() || ib == index.end()) {
        std::string missing = ia == index.end() ? e.a : "";
        if (ib == index.end()) missing += (missing.empty() ? "" : ", ") + e.b;
        sink.add(what, "edge " + e.a + "-" + e.b + " references unknown county " + missing);
        continue;
      }
      if (ia->second == ib->second) {
        sink.add(what, "self loop on " + e.a);
        continue;
      }
      if (airports_only && !(counties[ia->second].has_airport && counties[ib->second].has_airport)) {
        sink.add(what, "air route " + e.a + "-" + e.b + " touches a county without an airport");
        continue;
      }
      unique.insert({std::min(ia->second, ib->second), std::max(ia->second, ib->second)});
    }
    return std::vector<Edge>(unique.begin(), unique.end());
  };

  net.adjacency = resolve(adjacency_edges, "adjacency", false);
  if (air_edges) {
    net.air_routes = resolve(*air_edges, "air_routes", true);
  } else {
    for (std::size_t a = 0; a < counties.size(); ++a)
      for (std::size_t b = a + 1; b < counties.size(); ++b)
        if (counties[a].has_airport && counties[b].has_airport) net.air_routes.push_back({a, b});
  }
  sink.throw_if_any(ErrorCode::input, "invalid spread network");

  net.counties = std::move(counties);
  net.spread_rate = spread_rate;
  net.air_weight = air_weight;
  net.density_modifiers = density_modifiers;
  net.reindex();
  return net;
}

/// Accumulated importation pressure per county.
struct ImportationLedger {
  std::vector<double> pressure;

  static ImportationLedger zeros(std::size_t n) { return {std::vector<double>(n, 0.0)}; }
};

/// Adds one day of importation pressure to every county without an outbreak.
/// Each target sums its sources in ascending index order (adjacency first,
/// then air routes), so results are bitwise stable.
inline ImportationLedger accumulate_pressure(const SpreadNetwork& network, std::span<const CountyState> states,
                                             bool air_enabled, ImportationLedger ledger) {
  const std::size_t n = network.size();
  if (ledger.pressure.size() != n) ledger.pressure.assign(n, 0.0);
  if (states.size() != n) throw Error(ErrorCode::input, "county states do not match the network");

  auto source_term = [&](std::size_t i, std::size_t j) {
    if (!states[i].outbreak_started) return 0.0;
    const double prevalence = static_cast<double>(states[i].active_sick) /
                              static_cast<double>(network.counties[i].total_population());
    return network.spread_rate * network.density_modifiers[network.counties[i].density] *
           network.density_modifiers[network.counties[j].density] * prevalence;
  };

  for (std::size_t j = 0; j < n; ++j) {
    if (states[j].outbreak_started) continue;
    double delta = 0.0;
    for (std::size_t i : network.adjacent(j)) delta += source_term(i, j);
    if (air_enabled)
      for (std::size_t i : network.air_linked(j)) delta += network.air_weight * source_term(i, j);
    ledger.pressure[j] += delta;
  }
  return ledger;
}

/// Starts an outbreak on `day` in every county whose pressure reached the threshold.
inline std::vector<CountyState> trigger_outbreaks(const ImportationLedger& ledger, std::vector<CountyState> states,
                                                  double threshold, Day day) {
  if (!(threshold > 0.0)) throw Error(ErrorCode::validation, "trigger threshold must be > 0", {{"spread.threshold", "must be > 0"}});
  for (std::size_t j = 0; j < states.size() && j < ledger.pressure.size(); ++j)
    if (!states[j].outbreak_started && ledger.pressure[j] >= threshold) start_outbreak(states[j], day);
  return states;
}

struct Seed {
  std::string fips;
  Day day = 0;
  Persons initial_cases = 1;
  bool operator==(const Seed&) const = default;
};

struct ResolvedSeed {
  std::size_t county = 0;
  Day day = 0;
  Persons initial_cases = 0;
};

/// Fresh county states plus the seed schedule resolved to county indices.
struct SeedPlan {
  std::vector<CountyState> states;
  std::vector<ResolvedSeed> seeds;
};

inline SeedPlan seed_initial(const SpreadNetwork& network, std::span<const Seed> seeds) {
  DiagnosticSink sink;
  SeedPlan plan;
  plan.states.reserve(network.size());
  for (const auto& c : network.counties) plan.states.push_back(make_county_state(c.fips, c.population));
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto& s = seeds[k];
    const std::string field = "seeds[" + std::to_string(k) + "]";
    auto idx = network.index_of(s.fips);
    if (!idx) sink.add(field + ".fips", "unknown county " + s.fips);
    if (s.day < 0) sink.add(field + ".day", "must be >= 0");
    if (s.initial_cases < 1) sink.add(field + ".cases", "must be >= 1");
    if (idx && s.day >= 0 && s.initial_cases >= 1) plan.seeds.push_back({*idx, s.day, s.initial_cases});
  }
  sink.throw_if_any(ErrorCode::input, "invalid seeds");
  std::stable_sort(plan.seeds.begin(), plan.seeds.end(),
                   [](const ResolvedSeed& x, const ResolvedSeed& y) { return x.day < y.day; });
  return plan;
}

/// Splits `cases` over age groups in proportion to population using largest
/// remainders (ties to the younger group), so the parts sum exactly.
inline GroupCounts split_by_population(Persons cases, const GroupCounts& population) {
  GroupCounts out{};
  const Persons pop = total(population);
  if (pop <= 0 || cases <= 0) return out;
  std::array<double, kAgeGroupCount> remainder{};
  Persons assigned = 0;
  for (std::size_t g = 0; g < kAgeGroupCount; ++g) {
    const double share = static_cast<double>(cases) * static_cast<double>(population[g]) / static_cast<double>(pop);
    out[g] = static_cast<Persons>(std::floor(share));
    remainder[g] = share - std::floor(share);
    assigned += out[g];
  }
  while (assigned < cases) {
    std::size_t best = 0;
    for (std::size_t g = 1; g < kAgeGroupCount; ++g)
      if (remainder[g] > remainder[best]) best = g;
    if (remainder[best] < 0.0) best = index_of(AgeGroup::adult);
    ++out[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  return out;
}

}  // namespace covsim
