#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>

#include "covsim/covsim.hpp"
#include "covsim/gateway.hpp"

namespace fs = std::filesystem;
using namespace covsim;

namespace {

struct InputFlags {
  std::string counties;
  std::string adjacency;
  std::string air;
  std::string geometry;

  void add_to(CLI::App& cmd, bool required) {
    auto* c = cmd.add_option("--counties", counties, "County table (CSV)");
    auto* a = cmd.add_option("--adjacency", adjacency, "County adjacency edges (CSV)");
    if (required) {
      c->required();
      a->required();
    }
    cmd.add_option("--air", air, "Air routes (CSV); defaults to all airport pairs");
    cmd.add_option("--geometry", geometry, "County geometry (GeoJSON) served to the UI");
  }

  InputBundle load() const {
    auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<fs::path>(s); };
    return load_bundle(counties, adjacency, opt(air), opt(geometry));
  }
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
}

void write_outputs(const fs::path& dir, const SimulationResult& r, const json& echo) {
  fs::create_directories(dir);
  write_file(dir / "export.csv", export_csv(r));
  std::ostringstream s;
  write_summary(s, summary(r));
  write_file(dir / "summary.csv", s.str());
  write_file(dir / "config.json", echo.dump(2) + "\n");
}

LoadedConfig load_with_seed(const std::string& path, std::optional<std::uint64_t> seed) {
  LoadedConfig loaded = load_config(path);
  if (seed) {
    loaded.config.rounding = RoundingMode::stochastic;
    loaded.config.rng_seed = *seed;
    loaded.echo["rounding"]["mode"] = {{"value", "stochastic"}, {"source", "user"}};
    loaded.echo["rounding"]["seed"] = {{"value", *seed}, {"source", "user"}};
  }
  return loaded;
}

/// Parses "kind@day" with optional ":reduction" and ":ramp_days" suffixes.
DecisionAction parse_action_flag(const std::string& text, const MeasureDefaults& defaults) {
  const auto at = text.find('@');
  const auto bad = [&](const std::string& why) {
    return Error(ErrorCode::validation, "bad --add value '" + text + "': " + why, {{"--add", why}});
  };
  if (at == std::string::npos) throw bad("expected kind@day");
  const auto kind = parse_measure_kind(text.substr(0, at));
  if (!kind) throw bad("unknown measure kind");
  std::vector<std::string> parts;
  std::stringstream ss(text.substr(at + 1));
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty() || parts.size() > 3) throw bad("expected kind@day[:reduction[:ramp_days]]");
  DecisionAction a = defaults.make(*kind, 0);
  const auto day = detail::parse_number<Day>(parts[0]);
  if (!day) throw bad("day is not an integer");
  a.start_day = *day;
  if (parts.size() > 1) {
    const auto r = detail::parse_number<double>(parts[1]);
    if (!r) throw bad("reduction is not a number");
    a.reduction = *r;
  }
  if (parts.size() > 2) {
    const auto ramp = detail::parse_number<Day>(parts[2]);
    if (!ramp) throw bad("ramp_days is not an integer");
    a.ramp_days = *ramp;
  }
  return a;
}

void print_error(const Error& e) {
  std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
  for (const auto& d : e.details()) std::cerr << "  " << d.field << ": " << d.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"County-level epidemic scenario simulator"};
  app.require_subcommand(1);

  InputFlags sim_inputs;
  std::string sim_config, sim_out;
  std::optional<std::uint64_t> sim_seed;
  auto* simulate = app.add_subcommand("simulate", "Run one scenario and write export/summary CSVs");
  simulate->add_option("--config", sim_config, "Scenario configuration (JSON)")->required();
  sim_inputs.add_to(*simulate, true);
  simulate->add_option("--out", sim_out, "Output directory")->required();
  simulate->add_option("--seed", sim_seed, "Use stochastic rounding with this seed");

  InputFlags br_inputs;
  std::string br_config, br_out;
  Day br_day = 0;
  std::vector<std::string> br_add;
  std::optional<std::uint64_t> br_seed;
  auto* branch = app.add_subcommand("branch", "Run a scenario and a branch of it with extra actions");
  branch->add_option("--config", br_config, "Parent configuration (JSON)")->required();
  br_inputs.add_to(*branch, true);
  branch->add_option("--day", br_day, "Branch day")->required();
  branch->add_option("--add", br_add, "Action kind@day[:reduction[:ramp_days]]; repeatable");
  branch->add_option("--out", br_out, "Output directory (parent/ and child/ are created)")->required();
  branch->add_option("--seed", br_seed, "Use stochastic rounding with this seed");

  std::string sum_export;
  auto* summarize = app.add_subcommand("summary", "Print the statewide summary of an export CSV");
  summarize->add_option("--export", sum_export, "Export CSV written by simulate")->required();

  InputFlags srv_inputs;
  int port = 8080;
  std::string host = "127.0.0.1", store_dir;
  auto* serve = app.add_subcommand("serve", "Serve the /v1 HTTP API");
  serve->add_option("--port", port, "Port (0 picks a free one)")->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--store", store_dir, "Directory for scenarios and cached results");
  srv_inputs.add_to(*serve, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*simulate) {
      const LoadedConfig loaded = load_with_seed(sim_config, sim_seed);
      const InputBundle bundle = sim_inputs.load();
      const SimulationResult r = run(loaded.config, make_network(bundle, loaded.config.spread), "simulate");
      write_outputs(sim_out, r, loaded.echo);
      const StateSummary s = summary(r);
      std::cout << "peak day " << s.peak_sick_day << " (" << s.peak_sick_count << " active), duration "
                << s.outbreak_duration << " days, wrote " << (fs::path(sim_out) / "export.csv").string() << "\n";
    } else if (*branch) {
      const LoadedConfig loaded = load_with_seed(br_config, br_seed);
      ScenarioStore store;
      store.register_inputs("default", br_inputs.load());
      const Scenario parent = store.create(loaded.config);
      std::vector<DecisionAction> actions;
      for (const auto& text : br_add) actions.push_back(parse_action_flag(text, loaded.config.measure_defaults));
      const Scenario child = store.branch(parent.id, br_day, actions);
      json child_echo = config_to_json(child.config);
      child_echo["branch"] = {{"parent", parent.id}, {"branch_day", br_day}};
      write_outputs(fs::path(br_out) / "parent", *store.run(parent.id), loaded.echo);
      write_outputs(fs::path(br_out) / "child", *store.run(child.id), child_echo);
      const auto ps = summary(*store.run(parent.id)), cs = summary(*store.run(child.id));
      std::cout << "parent peak " << ps.peak_sick_count << " on day " << ps.peak_sick_day << "; child peak "
                << cs.peak_sick_count << " on day " << cs.peak_sick_day << "\n";
    } else if (*summarize) {
      auto in = detail::open_input(sum_export);
      write_summary(std::cout, summary(read_export(in)));
    } else if (*serve) {
      ScenarioStore store(store_dir.empty() ? std::nullopt : std::optional<fs::path>(store_dir));
      if (!srv_inputs.counties.empty() || !srv_inputs.adjacency.empty()) store.register_inputs("default", srv_inputs.load());
      httplib::Server server;
      Gateway gateway(store);
      gateway.install(server);
      const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
      if (bound < 0) throw Error(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
      std::cout << "listening on http://" << host << ":" << bound << "/v1" << std::endl;
      server.listen_after_bind();
    }
  } catch (const Error& e) {
    print_error(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
