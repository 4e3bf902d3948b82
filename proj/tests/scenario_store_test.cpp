#include <gtest/gtest.h>

#include <filesystem>
#include <thread>
#include <unistd.h>
#include <vector>

#include "support.hpp"

using namespace covsim;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("covsim_store_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  return dir;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::io;
}

}  // namespace

TEST(ScenarioStore, BranchKeepsPrefixAndDiverges) {
  ScenarioStore store;
  store.register_inputs("default", support::oklahoma());
  const Scenario parent = store.create(support::fixture_config("baseline.json"));
  const DecisionAction shelter = parent.config.measure_defaults.make(MeasureKind::shelter_in_place, 15);
  const Scenario child = store.branch(parent.id, 15, {shelter});
  EXPECT_EQ(child.parent_id, parent.id);
  EXPECT_EQ(child.config.actions.size(), 3u);

  const auto p = store.run(parent.id), c = store.run(child.id);
  for (Day d = 0; d < 15; ++d)
    for (std::size_t k = 0; k < p->county_count(); ++k)
      for (std::size_t f = 0; f < kFieldCount; ++f)
        ASSERT_EQ(p->at(static_cast<Field>(f), d, k), c->at(static_cast<Field>(f), d, k)) << "day " << d;
  EXPECT_LT(summary(*c).peak_sick_count, summary(*p).peak_sick_count);
}

TEST(ScenarioStore, BranchDropsParentActionsFromBranchDayOn) {
  ScenarioStore store;
  store.register_inputs("default", support::oklahoma());
  const Scenario parent = store.create(support::fixture_config("baseline.json"));  // media 1, school 10
  const Scenario child = store.branch(parent.id, 5, {});
  ASSERT_EQ(child.config.actions.size(), 1u);
  EXPECT_EQ(child.config.actions[0].kind, MeasureKind::media_alerts);
  const Scenario moved = store.branch(parent.id, 5, {parent.config.measure_defaults.make(MeasureKind::school_closures, 6)});
  EXPECT_EQ(moved.config.actions.size(), 2u);
}

TEST(ScenarioStore, HistoryViolations) {
  ScenarioStore store;
  store.register_inputs("default", support::oklahoma());
  const Scenario parent = store.create(support::fixture_config("baseline.json"));
  const auto& defaults = parent.config.measure_defaults;
  EXPECT_EQ(code_of([&] { store.branch(parent.id, 15, {defaults.make(MeasureKind::shelter_in_place, 14)}); }),
            ErrorCode::history_violation);
  // school closures already began on day 10
  EXPECT_EQ(code_of([&] { store.branch(parent.id, 15, {defaults.make(MeasureKind::school_closures, 20)}); }),
            ErrorCode::history_violation);
  EXPECT_EQ(code_of([&] { store.branch(parent.id, -1, {}); }), ErrorCode::out_of_range);
  EXPECT_EQ(code_of([&] { store.branch(parent.id, parent.config.disease.horizon + 1, {}); }), ErrorCode::out_of_range);
  EXPECT_EQ(code_of([&] { store.branch("nope", 3, {}); }), ErrorCode::not_found);
  EXPECT_EQ(store.list().size(), 1u);
}

TEST(ScenarioStore, BranchAtHorizonIsAllowed) {
  ScenarioStore store;
  store.register_inputs("default", support::oklahoma());
  const Scenario parent = store.create(support::fixture_config("baseline.json"));
  const Scenario child = store.branch(parent.id, parent.config.disease.horizon, {});
  EXPECT_EQ(*store.run(child.id), [&] {
    auto r = *store.run(parent.id);
    r.scenario_id = child.id;
    return r;
  }());
}

TEST(ScenarioStore, CreateRejectsUnknownSeedsAndInputs) {
  ScenarioStore store;
  store.register_inputs("default", support::oklahoma());
  ScenarioConfig cfg = support::fixture_config("baseline.json");
  cfg.seeds[0].fips = "99999";
  EXPECT_EQ(code_of([&] { store.create(cfg); }), ErrorCode::input);
  EXPECT_EQ(code_of([&] { store.create(support::fixture_config("baseline.json"), "other"); }), ErrorCode::not_found);
}

TEST(ScenarioStore, RunIsSingleFlight) {
  ScenarioStore store;
  store.register_inputs("default", support::oklahoma());
  const Scenario s = store.create(support::fixture_config("baseline.json"));
  std::vector<std::shared_ptr<const SimulationResult>> results(8);
  std::vector<std::thread> threads;
  for (std::size_t k = 0; k < results.size(); ++k) threads.emplace_back([&, k] { results[k] = store.run(s.id); });
  for (auto& t : threads) t.join();
  EXPECT_EQ(store.computations(), 1u);
  for (const auto& r : results) EXPECT_EQ(r.get(), results[0].get());
  EXPECT_TRUE(store.is_complete(s.id));
}

TEST(ScenarioStore, SurvivesRestart) {
  const fs::path dir = fresh_dir("restart");
  std::string parent_id, child_id;
  std::string parent_csv;
  {
    ScenarioStore store(dir);
    store.register_inputs("default", support::oklahoma());
    const Scenario p = store.create(support::fixture_config("baseline.json"));
    const Scenario c = store.branch(p.id, 20, {p.config.measure_defaults.make(MeasureKind::shelter_in_place, 20)});
    parent_id = p.id;
    child_id = c.id;
    parent_csv = export_csv(*store.run(p.id));
  }
  ScenarioStore reopened(dir);
  reopened.register_inputs("default", support::oklahoma());
  const auto list = reopened.list();
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[1].parent_id, parent_id);
  EXPECT_EQ(list[1].branch_day, 20);
  EXPECT_EQ(reopened.get(child_id).config.actions.size(), 3u);
  EXPECT_EQ(export_csv(*reopened.run(parent_id)), parent_csv);
  EXPECT_EQ(reopened.computations(), 0u);  // served from the on-disk cache
  reopened.run(child_id);
  EXPECT_EQ(reopened.computations(), 1u);
  const Scenario next = reopened.create(support::fixture_config("bed_pressure.json"));
  EXPECT_NE(next.id, parent_id);
  EXPECT_NE(next.id, child_id);
  fs::remove_all(dir);
}
