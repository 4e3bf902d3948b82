#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"

using namespace covsim;

namespace {

SimulationResult run_world(const support::RandomWorld& w) { return run(w.config, make_network(w.inputs, w.config.spread)); }

SimulationResult run_fixture(const ScenarioConfig& cfg) { return run(cfg, make_network(support::oklahoma(), cfg.spread)); }

void expect_invariants(const SimulationResult& r, const std::string& label) {
  static constexpr Field kCumulative[] = {Field::cumulative_sick, Field::recovered, Field::cumulative_deaths};
  for (std::size_t c = 0; c < r.county_count(); ++c) {
    for (Day d = 0; d < r.horizon(); ++d) {
      Persons susceptible = 0;
      for (auto g : kAgeGroups) susceptible += r.at(susceptible_field(g), d, c);
      ASSERT_EQ(susceptible + r.at(Field::cumulative_sick, d, c), r.population[c]) << label << " county " << c << " day " << d;
      ASSERT_LE(r.at(Field::beds_filled, d, c), r.bed_capacity[c]) << label;
      ASSERT_GE(r.at(Field::beds_filled, d, c), 0) << label;
      ASSERT_EQ(r.at(Field::hospital_demand, d, c), r.at(Field::beds_filled, d, c) + r.at(Field::unmet_demand, d, c));
      ASSERT_EQ(r.at(Field::active_sick, d, c),
                r.at(Field::cumulative_sick, d, c) - r.at(Field::recovered, d, c) - r.at(Field::cumulative_deaths, d, c))
          << label;
      ASSERT_GE(r.at(Field::active_sick, d, c), 0) << label;
      if (d == 0) continue;
      for (Field f : kCumulative) ASSERT_GE(r.at(f, d, c), r.at(f, d - 1, c)) << label << " " << to_string(f);
      ASSERT_EQ(r.at(Field::cumulative_sick, d, c) - r.at(Field::cumulative_sick, d - 1, c), support::new_sick(r, d, c));
      ASSERT_EQ(r.at(Field::cumulative_deaths, d, c) - r.at(Field::cumulative_deaths, d - 1, c), r.at(Field::new_deaths, d, c));
    }
  }
}

}  // namespace

TEST(Scenario, ConservationOnRandomWorlds) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    auto w = support::random_world(rng);
    if (trial % 4 == 0) {
      w.config.rounding = RoundingMode::stochastic;
      w.config.rng_seed = static_cast<std::uint64_t>(trial);
    }
    expect_invariants(run_world(w), "trial " + std::to_string(trial));
    if (HasFatalFailure()) return;
  }
}

TEST(Scenario, FixtureBaselineIsByteIdenticalAcrossRuns) {
  const ScenarioConfig cfg = support::fixture_config("baseline.json");
  EXPECT_EQ(export_csv(run_fixture(cfg)), export_csv(run_fixture(cfg)));
}

TEST(Scenario, StochasticRoundingIsReproducibleFromSeed) {
  ScenarioConfig cfg = support::fixture_config("baseline.json");
  cfg.rounding = RoundingMode::stochastic;
  cfg.rng_seed = 99;
  const auto a = run_fixture(cfg), b = run_fixture(cfg);
  EXPECT_EQ(a, b);
  cfg.rng_seed = 100;
  EXPECT_FALSE(run_fixture(cfg) == a);
  expect_invariants(a, "stochastic");
}

TEST(Scenario, FixtureRunIsFast) {
  const ScenarioConfig cfg = support::fixture_config("baseline.json");
  const auto network = make_network(support::oklahoma(), cfg.spread);
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run(cfg, network);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(r.horizon(), cfg.disease.horizon);
  EXPECT_LT(seconds, 1.0);
}

TEST(Scenario, AddingAReductionNeverRaisesCumulativeSick) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> red(0.01, 0.9);
  for (int trial = 0; trial < 150; ++trial) {
    auto w = support::random_world(rng);
    const auto kind = kMeasureKinds[static_cast<std::size_t>(trial) % kMeasureKinds.size()];
    std::erase_if(w.config.actions, [&](const DecisionAction& a) { return a.kind == kind; });
    const auto base = run_world(w);
    const DecisionAction added{kind, static_cast<Day>(rng() % static_cast<std::uint64_t>(w.config.disease.horizon)),
                               static_cast<Day>(rng() % 10), red(rng)};
    w.config.actions.push_back(added);
    const auto with = run_world(w);
    for (std::size_t c = 0; c < base.county_count(); ++c)
      for (Day d = 0; d < base.horizon(); ++d) {
        if (d < added.start_day)
          ASSERT_EQ(with.at(Field::cumulative_sick, d, c), base.at(Field::cumulative_sick, d, c));
        else
          ASSERT_LE(with.at(Field::cumulative_sick, d, c), base.at(Field::cumulative_sick, d, c))
              << "trial " << trial << " county " << c << " day " << d;
      }
  }
}

TEST(Scenario, EarlierStartNeverRaisesFinalCumulativeSick) {
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> red(0.01, 0.9);
  for (int trial = 0; trial < 150; ++trial) {
    auto w = support::random_world(rng);
    const auto kind = kMeasureKinds[static_cast<std::size_t>(trial) % kMeasureKinds.size()];
    std::erase_if(w.config.actions, [&](const DecisionAction& a) { return a.kind == kind; });
    const Day late = static_cast<Day>(1 + rng() % static_cast<std::uint64_t>(w.config.disease.horizon));
    const Day early = static_cast<Day>(rng() % static_cast<std::uint64_t>(late));
    const double reduction = red(rng);
    const Day ramp = static_cast<Day>(rng() % 10);
    auto at = [&](Day start) {
      auto copy = w;
      copy.config.actions.push_back({kind, start, ramp, reduction});
      return run_world(copy);
    };
    const auto r_late = at(late), r_early = at(early);
    const Day last = r_late.horizon() - 1;
    ASSERT_LE(support::statewide(r_early, Field::cumulative_sick, last), support::statewide(r_late, Field::cumulative_sick, last))
        << "trial " << trial;
  }
}

TEST(Scenario, ShelterOnDayTenBeatsDayFifteen) {
  const ScenarioConfig base = support::fixture_config("baseline.json");
  auto peak_with_shelter = [&](Day day) {
    ScenarioConfig cfg = base;
    cfg.actions.push_back(cfg.measure_defaults.make(MeasureKind::shelter_in_place, day));
    return summary(run_fixture(cfg)).peak_sick_count;
  };
  EXPECT_LT(peak_with_shelter(10), peak_with_shelter(15));
  EXPECT_LT(peak_with_shelter(15), summary(run_fixture(base)).peak_sick_count);
}

TEST(Summary, PeakMatchesBruteForceScan) {
  const auto r = run_fixture(support::fixture_config("baseline.json"));
  Persons best = -1;
  Day best_day = -1;
  for (Day d = 0; d < r.horizon(); ++d) {
    Persons s = 0;
    for (std::size_t c = 0; c < r.county_count(); ++c) s += r.at(Field::active_sick, d, c);
    if (s > best) {
      best = s;
      best_day = d;
    }
  }
  const auto s = summary(r);
  EXPECT_EQ(s.peak_sick_count, best);
  EXPECT_EQ(s.peak_sick_day, best_day);
  EXPECT_LE(s.outbreak_duration, r.horizon());
  EXPECT_EQ(s.total_sick, support::statewide(r, Field::cumulative_sick, r.horizon() - 1));
}

TEST(Summary, AllZeroResult) {
  ScenarioConfig cfg = support::fixture_config("baseline.json");
  cfg.seeds.clear();
  const auto s = summary(run_fixture(cfg));
  EXPECT_EQ(s.peak_sick_count, 0);
  EXPECT_EQ(s.outbreak_duration, 0);
  EXPECT_EQ(s.first_case_day, -1);
}

TEST(Views, FrameAndSeriesAgreeWithCells) {
  const auto r = run_fixture(support::fixture_config("baseline.json"));
  std::mt19937_64 rng(4);
  for (int k = 0; k < 50; ++k) {
    const Metric m = kMetrics[rng() % kMetrics.size()];
    const Day d = static_cast<Day>(rng() % static_cast<std::uint64_t>(r.horizon()));
    const std::size_t c = rng() % r.county_count();
    const MapFrame f = frame(r, d, m);
    ASSERT_EQ(f.entries.size(), r.county_count());
    const std::vector<std::string> ids{r.fips[c]};
    const auto s = series(r, ids, m);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(f.entries[c].value, s[0].values[static_cast<std::size_t>(d)]);
    EXPECT_EQ(f.entries[c].value, metric_value(r, m, d, c));
    EXPECT_DOUBLE_EQ(f.entries[c].normalized, static_cast<double>(f.entries[c].value) / static_cast<double>(r.population[c]));
  }
}

TEST(Views, ErrorsUseTheirCodes) {
  const auto r = run_fixture(support::fixture_config("baseline.json"));
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io;
  };
  EXPECT_EQ(code_of([&] { frame(r, r.horizon(), Metric::new_sick); }), ErrorCode::out_of_range);
  EXPECT_EQ(code_of([&] { frame(r, -1, Metric::new_sick); }), ErrorCode::out_of_range);
  EXPECT_EQ(code_of([&] { require_metric("temperature"); }), ErrorCode::out_of_range);
  const std::vector<std::string> bad{"99999"};
  EXPECT_EQ(code_of([&] { series(r, bad, Metric::new_sick); }), ErrorCode::not_found);
  EXPECT_TRUE(series(r, {}, Metric::new_sick).empty());
}

TEST(Scenario, InvalidConfigListsAllProblems) {
  ScenarioConfig cfg = support::fixture_config("baseline.json");
  cfg.disease.r0 = -2.0;
  cfg.occupancy_fraction = 3.0;
  cfg.actions.push_back(cfg.actions.front());
  try {
    run_fixture(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::validation);
    EXPECT_EQ(e.details().size(), 3u);
  }
}
