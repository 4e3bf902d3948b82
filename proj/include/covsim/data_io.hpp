#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "covsim/csv.hpp"
#include "covsim/error.hpp"
#include "covsim/scenario.hpp"

namespace covsim {

using json = nlohmann::json;

namespace detail {

template <class T>
std::optional<T> parse_number(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string(), {{path.string(), "cannot open file"}});
  return in;
}

inline std::string where(std::string_view source, std::size_t line, std::string_view column = {}) {
  std::string out = std::string(source) + ":" + std::to_string(line);
  if (!column.empty()) out += ":" + std::string(column);
  return out;
}

}  // namespace detail

inline constexpr std::array<std::string_view, 10> kCountyColumns{
    "fips", "name", "pop_0_17", "pop_18_64", "pop_65plus", "density_class", "total_beds", "lat", "lon", "has_airport"};

/// Parses a counties table. Every defect found becomes one diagnostic and
/// all of them are reported together.
inline std::vector<County> parse_counties(std::istream& in, std::string_view source = "counties.csv") {
  const csv::Table table = csv::read(in);
  DiagnosticSink sink;
  if (!table.header) throw Error(ErrorCode::input, std::string(source) + ": missing header row", {{std::string(source), "missing header row"}});
  std::vector<std::string> expected(kCountyColumns.begin(), kCountyColumns.end());
  std::vector<std::string> got;
  for (const auto& c : table.header->cells) got.push_back(detail::trim(c));
  if (got != expected) {
    std::string want;
    for (auto c : kCountyColumns) want += (want.empty() ? "" : ",") + std::string(c);
    throw Error(ErrorCode::input, std::string(source) + ": header must be " + want,
                {{detail::where(source, table.header->line), "header must be " + want}});
  }

  std::vector<County> counties;
  std::unordered_map<std::string, std::size_t> first_line;
  for (const auto& row : table.rows) {
    if (row.cells.size() != kCountyColumns.size()) {
      sink.add(detail::where(source, row.line), "expected " + std::to_string(kCountyColumns.size()) + " columns, got " +
                                                    std::to_string(row.cells.size()));
      continue;
    }
    auto cell = [&](std::size_t i) { return detail::trim(row.cells[i]); };
    County c;
    bool ok = true;
    auto fail = [&](std::string_view column, std::string message) {
      sink.add(detail::where(source, row.line, column), std::move(message));
      ok = false;
    };

    c.fips = cell(0);
    c.name = cell(1);
    if (c.fips.empty()) fail("fips", "empty fips");
    for (std::size_t g = 0; g < kAgeGroupCount; ++g) {
      auto v = detail::parse_number<Persons>(cell(2 + g));
      if (!v || *v < 0) fail(kCountyColumns[2 + g], "population must be a non-negative integer");
      else c.population[g] = *v;
    }
    if (ok && c.total_population() <= 0) fail("pop_0_17", "total population must be positive");
    if (auto d = parse_density_class(cell(5))) c.density = *d;
    else fail("density_class", "unknown density class '" + cell(5) + "' (rural, small, urban)");
    if (auto b = detail::parse_number<Persons>(cell(6)); b && *b >= 0) c.total_beds = *b;
    else fail("total_beds", "must be a non-negative integer");
    if (auto lat = detail::parse_number<double>(cell(7)); lat && *lat >= -90.0 && *lat <= 90.0) c.centroid.lat = *lat;
    else fail("lat", "must be a latitude in degrees");
    if (auto lon = detail::parse_number<double>(cell(8)); lon && *lon >= -180.0 && *lon <= 180.0) c.centroid.lon = *lon;
    else fail("lon", "must be a longitude in degrees");
    const std::string airport = cell(9);
    if (airport == "1" || airport == "true") c.has_airport = true;
    else if (airport == "0" || airport == "false") c.has_airport = false;
    else fail("has_airport", "must be 0, 1, true or false");

    if (!c.fips.empty()) {
      auto [it, fresh] = first_line.emplace(c.fips, row.line);
      if (!fresh) {
        fail("fips", "duplicate fips " + c.fips + " (lines " + std::to_string(it->second) + " and " +
                         std::to_string(row.line) + ")");
      }
    }
    if (ok) counties.push_back(std::move(c));
  }
  sink.throw_if_any(ErrorCode::input, "invalid county file " + std::string(source));
  return counties;
}

inline std::vector<County> load_counties(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_counties(in, path.filename().string());
}

inline void write_counties(std::ostream& out, std::span<const County> counties) {
  std::vector<std::string> header(kCountyColumns.begin(), kCountyColumns.end());
  csv::write_row(out, header);
  for (const auto& c : counties) {
    std::ostringstream lat, lon;
    lat.precision(17);
    lon.precision(17);
    lat << c.centroid.lat;
    lon << c.centroid.lon;
    csv::write_row(out, {c.fips, c.name, std::to_string(c.population[0]), std::to_string(c.population[1]),
                         std::to_string(c.population[2]), std::string(to_string(c.density)),
                         std::to_string(c.total_beds), lat.str(), lon.str(), c.has_airport ? "1" : "0"});
  }
}

/// Parses a two-column edge list, checking every endpoint against `counties`.
/// A zero-byte file or a header-only file is an empty list. Duplicates
/// (either orientation) are dropped.
inline std::vector<FipsEdge> parse_edges(std::istream& in, std::span<const County> counties,
                                         std::string_view source = "edges.csv") {
  const csv::Table table = csv::read(in);
  if (!table.header) return {};
  DiagnosticSink sink;
  if (table.header->cells.size() != 2) {
    throw Error(ErrorCode::input, std::string(source) + ": header must have two columns",
                {{detail::where(source, table.header->line), "header must have two columns"}});
  }
  std::unordered_map<std::string, const County*> known;
  for (const auto& c : counties) known.emplace(c.fips, &c);

  std::vector<FipsEdge> edges;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : table.rows) {
    if (row.cells.size() != 2) {
      sink.add(detail::where(source, row.line), "expected 2 columns, got " + std::to_string(row.cells.size()));
      continue;
    }
    FipsEdge e{detail::trim(row.cells[0]), detail::trim(row.cells[1])};
    bool ok = true;
    for (const auto& id : {e.a, e.b}) {
      if (!known.contains(id)) {
        sink.add(detail::where(source, row.line), "unknown county " + id);
        ok = false;
      }
    }
    if (ok && e.a == e.b) {
      sink.add(detail::where(source, row.line), "self loop on " + e.a);
      ok = false;
    }
    if (!ok) continue;
    auto key = std::minmax(e.a, e.b);
    if (seen.emplace(key.first, key.second).second) edges.push_back(std::move(e));
  }
  sink.throw_if_any(ErrorCode::input, "invalid edge file " + std::string(source));
  return edges;
}

inline std::vector<FipsEdge> load_adjacency(const std::filesystem::path& path, std::span<const County> counties) {
  auto in = detail::open_input(path);
  return parse_edges(in, counties, path.filename().string());
}

/// Air routes additionally require both endpoints to have an airport.
inline std::vector<FipsEdge> load_air_routes(const std::filesystem::path& path, std::span<const County> counties) {
  auto in = detail::open_input(path);
  auto edges = parse_edges(in, counties, path.filename().string());
  DiagnosticSink sink;
  std::unordered_map<std::string, bool> airport;
  for (const auto& c : counties) airport[c.fips] = c.has_airport;
  for (const auto& e : edges)
    if (!airport[e.a] || !airport[e.b])
      sink.add(path.filename().string(), "air route " + e.a + "-" + e.b + " touches a county without an airport");
  sink.throw_if_any(ErrorCode::input, "invalid air routes");
  return edges;
}

inline InputBundle load_bundle(const std::filesystem::path& counties, const std::filesystem::path& adjacency,
                               const std::optional<std::filesystem::path>& air_routes = std::nullopt,
                               const std::optional<std::filesystem::path>& geometry = std::nullopt) {
  InputBundle b;
  b.counties = load_counties(counties);
  b.adjacency = load_adjacency(adjacency, b.counties);
  if (air_routes) b.air_routes = load_air_routes(*air_routes, b.counties);
  if (geometry) {
    auto in = detail::open_input(*geometry);
    std::ostringstream ss;
    ss << in.rdbuf();
    b.geometry = ss.str();
  }
  return b;
}

// ---------------------------------------------------------------------------
// Configuration

/// A parsed configuration plus its echo-back, in which every leaf is
/// {"value": ..., "source": "default" | "user"}.
struct LoadedConfig {
  ScenarioConfig config;
  json echo;
};

namespace detail {

class ConfigReader {
 public:
  DiagnosticSink sink;

  // Returns the named sub-object of `parent` (or an empty object), rejecting unknown keys.
  json section(const json& parent, const std::string& path, std::string_view key,
               std::initializer_list<std::string_view> allowed) {
    const std::string full = join(path, key);
    if (!parent.contains(std::string(key))) return json::object();
    const json& obj = parent.at(std::string(key));
    if (!obj.is_object()) {
      sink.add(full, "must be an object");
      return json::object();
    }
    reject_unknown(obj, full, allowed);
    return obj;
  }

  void reject_unknown(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, _] : obj.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) sink.add(join(path, k), "unknown key");
    }
  }

  template <class T>
  void field(const json& obj, const std::string& path, std::string_view key, T& target, json& echo) {
    const std::string k(key);
    if (!obj.contains(k)) {
      echo[k] = {{"value", target}, {"source", "default"}};
      return;
    }
    const json& v = obj.at(k);
    if (read(v, target)) {
      echo[k] = {{"value", target}, {"source", "user"}};
    } else {
      sink.add(join(path, key), std::string("must be ") + type_name<T>());
      echo[k] = {{"value", v}, {"source", "user"}};
    }
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

 private:
  static bool read(const json& v, double& out) {
    if (!v.is_number()) return false;
    out = v.get<double>();
    return true;
  }
  static bool read(const json& v, int& out) {
    if (!v.is_number_integer()) return false;
    auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) return false;
    out = static_cast<int>(x);
    return true;
  }
  static bool read(const json& v, std::uint64_t& out) {
    if (!v.is_number_unsigned()) return false;
    out = v.get<std::uint64_t>();
    return true;
  }
  static bool read(const json& v, bool& out) {
    if (!v.is_boolean()) return false;
    out = v.get<bool>();
    return true;
  }
  template <class T>
  static constexpr const char* type_name() {
    if constexpr (std::is_same_v<T, double>) return "a number";
    else if constexpr (std::is_same_v<T, bool>) return "a boolean";
    else if constexpr (std::is_same_v<T, std::uint64_t>) return "a non-negative integer";
    else return "an integer";
  }
};

}  // namespace detail

inline json action_to_json(const DecisionAction& a) {
  return {{"kind", to_string(a.kind)}, {"start_day", a.start_day}, {"ramp_days", a.ramp_days}, {"reduction", a.reduction}};
}

/// Reads one action; missing ramp_days/reduction come from `defaults`.
inline std::optional<DecisionAction> action_from_json(const json& j, const MeasureDefaults& defaults,
                                                      const std::string& path, DiagnosticSink& sink) {
  if (!j.is_object()) {
    sink.add(path, "must be an object");
    return std::nullopt;
  }
  detail::ConfigReader reader;
  reader.reject_unknown(j, path, {"kind", "start_day", "ramp_days", "reduction"});
  std::optional<MeasureKind> kind;
  if (j.contains("kind") && j["kind"].is_string()) kind = parse_measure_kind(j["kind"].get<std::string>());
  if (!kind) {
    reader.sink.add(path + ".kind", "must be one of media_alerts, school_closures, shelter_in_place");
    sink.merge(reader.sink.items());
    return std::nullopt;
  }
  DecisionAction a = defaults.make(*kind, 0);
  json echo;
  if (!j.contains("start_day")) reader.sink.add(path + ".start_day", "is required");
  reader.field(j, path, "start_day", a.start_day, echo);
  reader.field(j, path, "ramp_days", a.ramp_days, echo);
  reader.field(j, path, "reduction", a.reduction, echo);
  reader.sink.merge(a.validate(path + "."));
  sink.merge(reader.sink.items());
  if (!reader.sink.empty()) return std::nullopt;
  return a;
}

/// Builds a configuration from a JSON document, filling defaults. Unknown
/// keys and out-of-range values are all reported in one validation error.
inline LoadedConfig parse_config(const json& root) {
  detail::ConfigReader r;
  LoadedConfig out;
  ScenarioConfig& c = out.config;
  json& echo = out.echo;
  echo = json::object();
  if (!root.is_object()) throw Error(ErrorCode::validation, "configuration must be a JSON object", {{"", "must be an object"}});
  r.reject_unknown(root, "", {"disease", "age_groups", "spread", "hospital", "measures", "actions", "seeds", "rounding"});

  {
    json s = r.section(root, "", "disease",
                       {"r0", "shedding_period", "incubation_period", "mortality_rate", "time_to_death", "recovery_time",
                        "hospitalization_rate", "days_in_hospital", "excess_mortality_multiplier", "horizon",
                        "initial_infectious_fraction"});
    json& e = echo["disease"];
    auto& d = c.disease;
    r.field(s, "disease", "r0", d.r0, e);
    r.field(s, "disease", "shedding_period", d.shedding_period, e);
    r.field(s, "disease", "incubation_period", d.incubation_period, e);
    r.field(s, "disease", "mortality_rate", d.mortality_rate, e);
    r.field(s, "disease", "time_to_death", d.time_to_death, e);
    r.field(s, "disease", "recovery_time", d.recovery_time, e);
    r.field(s, "disease", "hospitalization_rate", d.hospitalization_rate, e);
    r.field(s, "disease", "days_in_hospital", d.days_in_hospital, e);
    r.field(s, "disease", "excess_mortality_multiplier", d.excess_mortality_multiplier, e);
    r.field(s, "disease", "horizon", d.horizon, e);
    r.field(s, "disease", "initial_infectious_fraction", d.initial_infectious_fraction, e);
  }
  {
    json s = r.section(root, "", "age_groups", {"0-17", "18-64", "65+"});
    for (auto g : kAgeGroups) {
      const std::string key(label(g));
      json group = r.section(s, "age_groups", key, {"prevalence_multiplier", "hospitalization_multiplier", "mortality_multiplier"});
      json& e = echo["age_groups"][key];
      const std::string path = "age_groups." + key;
      r.field(group, path, "prevalence_multiplier", c.profiles[g].prevalence_multiplier, e);
      r.field(group, path, "hospitalization_multiplier", c.profiles[g].hospitalization_multiplier, e);
      r.field(group, path, "mortality_multiplier", c.profiles[g].mortality_multiplier, e);
    }
  }
  {
    json s = r.section(root, "", "spread", {"spread_rate", "air_enabled", "air_weight", "threshold", "density_modifiers"});
    json& e = echo["spread"];
    r.field(s, "spread", "spread_rate", c.spread.spread_rate, e);
    r.field(s, "spread", "air_enabled", c.spread.air_enabled, e);
    r.field(s, "spread", "air_weight", c.spread.air_weight, e);
    r.field(s, "spread", "threshold", c.spread.threshold, e);
    json dm = r.section(s, "spread", "density_modifiers", {"rural", "small", "urban"});
    for (auto d : {DensityClass::rural, DensityClass::small, DensityClass::urban})
      r.field(dm, "spread.density_modifiers", to_string(d), c.spread.density_modifiers[d], e["density_modifiers"]);
  }
  {
    json s = r.section(root, "", "hospital", {"occupancy_fraction"});
    r.field(s, "hospital", "occupancy_fraction", c.occupancy_fraction, echo["hospital"]);
  }
  {
    json s = r.section(root, "", "measures", {"media_alerts", "school_closures", "shelter_in_place"});
    for (auto k : kMeasureKinds) {
      const std::string key(to_string(k));
      json m = r.section(s, "measures", key, {"reduction", "ramp_days"});
      json& e = echo["measures"][key];
      r.field(m, "measures." + key, "reduction", c.measure_defaults[k].reduction, e);
      r.field(m, "measures." + key, "ramp_days", c.measure_defaults[k].ramp_days, e);
    }
  }
  {
    json s = r.section(root, "", "rounding", {"mode", "seed"});
    json& e = echo["rounding"];
    if (s.contains("mode")) {
      std::optional<RoundingMode> mode;
      if (s["mode"].is_string()) mode = parse_rounding_mode(s["mode"].get<std::string>());
      if (mode) c.rounding = *mode;
      else r.sink.add("rounding.mode", "must be half_even or stochastic");
      e["mode"] = {{"value", to_string(c.rounding)}, {"source", "user"}};
    } else {
      e["mode"] = {{"value", to_string(c.rounding)}, {"source", "default"}};
    }
    r.field(s, "rounding", "seed", c.rng_seed, e);
  }
  if (root.contains("actions")) {
    const json& list = root["actions"];
    if (!list.is_array()) {
      r.sink.add("actions", "must be an array");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i)
        if (auto a = action_from_json(list[i], c.measure_defaults, "actions[" + std::to_string(i) + "]", r.sink))
          c.actions.push_back(*a);
    }
  }
  {
    json acts = json::array();
    for (const auto& a : c.actions) acts.push_back(action_to_json(a));
    echo["actions"] = {{"value", acts}, {"source", root.contains("actions") ? "user" : "default"}};
  }
  if (root.contains("seeds")) {
    const json& list = root["seeds"];
    if (!list.is_array()) {
      r.sink.add("seeds", "must be an array");
    } else {
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string path = "seeds[" + std::to_string(i) + "]";
        const json& item = list[i];
        if (!item.is_object()) {
          r.sink.add(path, "must be an object");
          continue;
        }
        r.reject_unknown(item, path, {"fips", "day", "cases"});
        Seed seed;
        if (item.contains("fips") && item["fips"].is_string()) seed.fips = item["fips"].get<std::string>();
        else r.sink.add(path + ".fips", "must be a string");
        json scratch;
        int day = 0;
        r.field(item, path, "day", day, scratch);
        seed.day = day;
        long long cases = 1;
        if (item.contains("cases")) {
          if (item["cases"].is_number_integer()) cases = item["cases"].get<long long>();
          else r.sink.add(path + ".cases", "must be an integer");
        }
        seed.initial_cases = cases;
        c.seeds.push_back(std::move(seed));
      }
    }
  }
  {
    json seeds = json::array();
    for (const auto& s : c.seeds) seeds.push_back({{"fips", s.fips}, {"day", s.day}, {"cases", s.initial_cases}});
    echo["seeds"] = {{"value", seeds}, {"source", root.contains("seeds") ? "user" : "default"}};
  }

  // Range checks only make sense once the types parsed.
  if (r.sink.empty()) r.sink.merge(c.validate());
  r.sink.throw_if_any(ErrorCode::validation, "invalid configuration");
  return out;
}

inline LoadedConfig load_config(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::validation, path.string() + ": " + e.what(), {{path.string(), "malformed JSON"}});
  }
  return parse_config(root);
}

/// Full, explicit configuration; parse_config(config_to_json(c)).config == c.
inline json config_to_json(const ScenarioConfig& c) {
  json j;
  const auto& d = c.disease;
  j["disease"] = {{"r0", d.r0},
                  {"shedding_period", d.shedding_period},
                  {"incubation_period", d.incubation_period},
                  {"mortality_rate", d.mortality_rate},
                  {"time_to_death", d.time_to_death},
                  {"recovery_time", d.recovery_time},
                  {"hospitalization_rate", d.hospitalization_rate},
                  {"days_in_hospital", d.days_in_hospital},
                  {"excess_mortality_multiplier", d.excess_mortality_multiplier},
                  {"horizon", d.horizon},
                  {"initial_infectious_fraction", d.initial_infectious_fraction}};
  for (auto g : kAgeGroups)
    j["age_groups"][std::string(label(g))] = {{"prevalence_multiplier", c.profiles[g].prevalence_multiplier},
                                               {"hospitalization_multiplier", c.profiles[g].hospitalization_multiplier},
                                               {"mortality_multiplier", c.profiles[g].mortality_multiplier}};
  j["spread"] = {{"spread_rate", c.spread.spread_rate},
                 {"air_enabled", c.spread.air_enabled},
                 {"air_weight", c.spread.air_weight},
                 {"threshold", c.spread.threshold}};
  for (auto dc : {DensityClass::rural, DensityClass::small, DensityClass::urban})
    j["spread"]["density_modifiers"][std::string(to_string(dc))] = c.spread.density_modifiers[dc];
  j["hospital"] = {{"occupancy_fraction", c.occupancy_fraction}};
  for (auto k : kMeasureKinds)
    j["measures"][std::string(to_string(k))] = {{"reduction", c.measure_defaults[k].reduction},
                                                 {"ramp_days", c.measure_defaults[k].ramp_days}};
  j["actions"] = json::array();
  for (const auto& a : c.actions) j["actions"].push_back(action_to_json(a));
  j["seeds"] = json::array();
  for (const auto& s : c.seeds) j["seeds"].push_back({{"fips", s.fips}, {"day", s.day}, {"cases", s.initial_cases}});
  j["rounding"] = {{"mode", to_string(c.rounding)}, {"seed", c.rng_seed}};
  return j;
}

// ---------------------------------------------------------------------------
// Exports

/// Export columns: day, fips, population, bed_capacity, then every Field in
/// declaration order. One row per county-day, day-major, counties in input order.
inline std::vector<std::string> export_header() {
  std::vector<std::string> h{"day", "fips", "population", "bed_capacity"};
  for (auto name : kFieldNames) h.emplace_back(name);
  return h;
}

inline void write_export(std::ostream& out, const SimulationResult& r) {
  csv::write_row(out, export_header());
  std::string line;
  for (Day d = 0; d < r.horizon(); ++d) {
    for (std::size_t c = 0; c < r.county_count(); ++c) {
      line.clear();
      line += std::to_string(d);
      line += ',';
      line += csv::escape(r.fips[c]);
      line += ',';
      line += std::to_string(r.population[c]);
      line += ',';
      line += std::to_string(r.bed_capacity[c]);
      for (std::size_t f = 0; f < kFieldCount; ++f) {
        line += ',';
        line += std::to_string(r.at(static_cast<Field>(f), d, c));
      }
      line += '\n';
      out << line;
    }
  }
}

inline std::string export_csv(const SimulationResult& r) {
  std::ostringstream ss;
  write_export(ss, r);
  return ss.str();
}

/// Reads an export back into a result.
inline SimulationResult read_export(std::istream& in, std::string scenario_id = {}) {
  const csv::Table t = csv::read(in);
  if (!t.header || t.header->cells != export_header())
    throw Error(ErrorCode::input, "export file has an unexpected header", {{"export", "unexpected header"}});
  const std::size_t width = export_header().size();

  std::vector<std::string> ids;
  std::vector<Persons> population, capacity;
  Day horizon = 0;
  for (const auto& row : t.rows) {
    if (row.cells.size() != width)
      throw Error(ErrorCode::input, "export line " + std::to_string(row.line) + " has the wrong width");
    auto day = detail::parse_number<Day>(row.cells[0]);
    if (!day || *day < 0) throw Error(ErrorCode::input, "export line " + std::to_string(row.line) + ": bad day");
    if (*day == 0) {
      ids.push_back(row.cells[1]);
      population.push_back(detail::parse_number<Persons>(row.cells[2]).value_or(0));
      capacity.push_back(detail::parse_number<Persons>(row.cells[3]).value_or(0));
    }
    horizon = std::max(horizon, *day + 1);
  }
  if (ids.empty() || t.rows.size() != static_cast<std::size_t>(horizon) * ids.size())
    throw Error(ErrorCode::input, "export is not a complete day x county grid");

  SimulationResult r(std::move(scenario_id), std::move(ids), std::move(population), std::move(capacity), horizon);
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    const auto& row = t.rows[k];
    const Day d = static_cast<Day>(k / r.county_count());
    const std::size_t c = k % r.county_count();
    if (detail::parse_number<Day>(row.cells[0]) != d || row.cells[1] != r.fips[c])
      throw Error(ErrorCode::input, "export line " + std::to_string(row.line) + " is out of order");
    for (std::size_t f = 0; f < kFieldCount; ++f) {
      auto v = detail::parse_number<Persons>(row.cells[4 + f]);
      if (!v) throw Error(ErrorCode::input, "export line " + std::to_string(row.line) + ": bad value");
      r.at(static_cast<Field>(f), d, c) = *v;
    }
  }
  return r;
}

inline std::vector<std::string> summary_header() {
  return {"peak_sick_day", "peak_sick_count", "outbreak_duration", "first_case_day", "last_active_day",
          "total_sick",    "total_deaths",    "total_hospitalizations"};
}

inline void write_summary(std::ostream& out, const StateSummary& s) {
  csv::write_row(out, summary_header());
  csv::write_row(out, {std::to_string(s.peak_sick_day), std::to_string(s.peak_sick_count),
                       std::to_string(s.outbreak_duration), std::to_string(s.first_case_day),
                       std::to_string(s.last_active_day), std::to_string(s.total_sick), std::to_string(s.total_deaths),
                       std::to_string(s.total_hospitalizations)});
}

inline json summary_to_json(const StateSummary& s) {
  return {{"peak_sick_day", s.peak_sick_day},       {"peak_sick_count", s.peak_sick_count},
          {"outbreak_duration", s.outbreak_duration}, {"first_case_day", s.first_case_day},
          {"last_active_day", s.last_active_day},   {"total_sick", s.total_sick},
          {"total_deaths", s.total_deaths},         {"total_hospitalizations", s.total_hospitalizations}};
}

}  // namespace covsim
