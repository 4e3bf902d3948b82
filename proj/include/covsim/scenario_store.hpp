#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "covsim/data_io.hpp"
#include "covsim/error.hpp"
#include "covsim/scenario.hpp"

namespace covsim {

/// A node of the decision history tree.
struct Scenario {
  std::string id;
  std::optional<std::string> parent_id;
  Day branch_day = 0;
  ScenarioConfig config;
  std::string inputs_ref = "default";
};

inline json scenario_to_json(const Scenario& s) {
  return {{"id", s.id},
          {"parent_id", s.parent_id ? json(*s.parent_id) : json(nullptr)},
          {"branch_day", s.branch_day},
          {"inputs", s.inputs_ref},
          {"config", config_to_json(s.config)}};
}

inline Scenario scenario_from_json(const json& j) {
  Scenario s;
  s.id = j.at("id").get<std::string>();
  if (!j.at("parent_id").is_null()) s.parent_id = j.at("parent_id").get<std::string>();
  s.branch_day = j.at("branch_day").get<Day>();
  s.inputs_ref = j.at("inputs").get<std::string>();
  s.config = parse_config(j.at("config")).config;
  return s;
}

/// Append-only scenario tree with cached, immutable run results.
///
/// With a storage directory, scenarios are appended to scenarios.jsonl and
/// finished results are written to results/<id>.csv; a store reopened on the
/// same directory picks both up again. Each scenario is computed at most once
/// (concurrent run() calls on one id wait for the first).
class ScenarioStore {
 public:
  explicit ScenarioStore(std::optional<std::filesystem::path> root = std::nullopt) : root_(std::move(root)) {
    if (!root_) return;
    std::error_code ec;
    std::filesystem::create_directories(*root_ / "results", ec);
    if (ec) throw Error(ErrorCode::io, "cannot create store directory " + root_->string() + ": " + ec.message());
    std::ifstream in(*root_ / "scenarios.jsonl");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      Scenario s = scenario_from_json(json::parse(line));
      next_id_ = std::max(next_id_, numeric_suffix(s.id) + 1);
      auto entry = std::make_shared<Entry>();
      entry->scenario = std::move(s);
      order_.push_back(entry->scenario.id);
      entries_.emplace(entry->scenario.id, std::move(entry));
    }
  }

  void register_inputs(const std::string& name, InputBundle bundle) {
    std::lock_guard lock(mutex_);
    inputs_[name] = std::make_shared<const InputBundle>(std::move(bundle));
  }

  std::shared_ptr<const InputBundle> inputs(const std::string& name) const {
    std::lock_guard lock(mutex_);
    auto it = inputs_.find(name);
    if (it == inputs_.end()) throw Error(ErrorCode::not_found, "unknown input bundle '" + name + "'", {{"inputs", "unknown input bundle"}});
    return it->second;
  }

  Scenario create(ScenarioConfig config, const std::string& inputs_ref = "default") {
    check_against_inputs(config, inputs_ref);
    Scenario s;
    s.config = std::move(config);
    s.inputs_ref = inputs_ref;
    return insert(std::move(s));
  }

  /// New child of `parent_id` that keeps the parent's actions starting before
  /// `branch_day` and adds `new_actions`, which may not start earlier.
  Scenario branch(const std::string& parent_id, Day branch_day, const std::vector<DecisionAction>& new_actions) {
    const Scenario parent = get(parent_id);
    if (branch_day < 0 || branch_day > parent.config.disease.horizon)
      throw Error(ErrorCode::out_of_range, "branch day " + std::to_string(branch_day) + " outside [0, " +
                                               std::to_string(parent.config.disease.horizon) + "]",
                  {{"branch_day", "out of range"}});
    DiagnosticSink history;
    std::vector<DecisionAction> actions;
    for (const auto& a : parent.config.actions)
      if (a.start_day < branch_day) actions.push_back(a);
    for (std::size_t i = 0; i < new_actions.size(); ++i) {
      const auto& a = new_actions[i];
      const std::string field = "actions[" + std::to_string(i) + "]";
      if (a.start_day < branch_day)
        history.add(field + ".start_day", "starts on day " + std::to_string(a.start_day) + ", before branch day " +
                                              std::to_string(branch_day));
      for (const auto& kept : actions)
        if (kept.kind == a.kind && kept.start_day < branch_day)
          history.add(field + ".kind", std::string(to_string(a.kind)) + " already started on day " +
                                           std::to_string(kept.start_day));
    }
    history.throw_if_any(ErrorCode::history_violation, "branch would rewrite history");
    for (const auto& a : new_actions) actions.push_back(a);

    Scenario child;
    child.parent_id = parent.id;
    child.branch_day = branch_day;
    child.config = parent.config;
    child.config.actions = std::move(actions);
    child.inputs_ref = parent.inputs_ref;
    DiagnosticSink sink;
    sink.merge(child.config.validate());
    sink.throw_if_any(ErrorCode::validation, "invalid branch");
    return insert(std::move(child));
  }

  Scenario get(const std::string& id) const { return find(id)->scenario; }

  std::vector<Scenario> list() const {
    std::lock_guard lock(mutex_);
    std::vector<Scenario> out;
    for (const auto& id : order_) out.push_back(entries_.at(id)->scenario);
    return out;
  }

  bool is_complete(const std::string& id) const {
    auto e = find(id);
    std::lock_guard lock(e->run_mutex);
    return e->result != nullptr;
  }

  /// Runs (or returns the cached result of) a scenario.
  std::shared_ptr<const SimulationResult> run(const std::string& id) {
    auto e = find(id);
    std::lock_guard lock(e->run_mutex);
    if (e->result) return e->result;
    if (root_) {
      const auto path = result_path(id);
      if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        e->result = std::make_shared<const SimulationResult>(read_export(in, id));
        return e->result;
      }
    }
    const auto bundle = inputs(e->scenario.inputs_ref);
    const SpreadNetwork network = make_network(*bundle, e->scenario.config.spread);
    auto result = std::make_shared<const SimulationResult>(covsim::run(e->scenario.config, network, id));
    ++computations_;
    if (root_) {
      const auto path = result_path(id);
      const auto tmp = std::filesystem::path(path).concat(".tmp");
      {
        std::ofstream out(tmp, std::ios::binary);
        write_export(out, *result);
        if (!out) throw Error(ErrorCode::io, "cannot write " + tmp.string());
      }
      std::filesystem::rename(tmp, path);
    }
    e->result = std::move(result);
    return e->result;
  }

  /// Number of simulations actually computed by this store instance.
  std::size_t computations() const noexcept { return computations_.load(); }

 private:
  struct Entry {
    Scenario scenario;
    mutable std::mutex run_mutex;
    std::shared_ptr<const SimulationResult> result;
  };

  static long long numeric_suffix(const std::string& id) {
    if (id.size() < 2 || id[0] != 's') return 0;
    return detail::parse_number<long long>(std::string_view(id).substr(1)).value_or(0);
  }

  std::filesystem::path result_path(const std::string& id) const { return *root_ / "results" / (id + ".csv"); }

  std::shared_ptr<Entry> find(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(id);
    if (it == entries_.end()) throw Error(ErrorCode::not_found, "unknown scenario '" + id + "'", {{"id", "unknown scenario"}});
    return it->second;
  }

  void check_against_inputs(const ScenarioConfig& config, const std::string& inputs_ref) const {
    DiagnosticSink sink;
    sink.merge(config.validate());
    sink.throw_if_any(ErrorCode::validation, "invalid scenario configuration");
    const auto bundle = inputs(inputs_ref);
    const SpreadNetwork network = make_network(*bundle, config.spread);
    seed_initial(network, config.seeds);
  }

  Scenario insert(Scenario s) {
    std::lock_guard lock(mutex_);
    s.id = "s" + std::to_string(next_id_++);
    if (root_) {
      std::ofstream out(*root_ / "scenarios.jsonl", std::ios::app);
      out << scenario_to_json(s).dump() << '\n';
      if (!out) throw Error(ErrorCode::io, "cannot append to scenario log");
    }
    auto entry = std::make_shared<Entry>();
    entry->scenario = s;
    order_.push_back(s.id);
    entries_.emplace(s.id, std::move(entry));
    return s;
  }

  std::optional<std::filesystem::path> root_;
  mutable std::mutex mutex_;
  long long next_id_ = 1;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
  std::vector<std::string> order_;
  std::map<std::string, std::shared_ptr<const InputBundle>> inputs_;
  std::atomic<std::size_t> computations_{0};
};

}  // namespace covsim
