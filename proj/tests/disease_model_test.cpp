#include <gtest/gtest.h>

#include <set>
#include <string>

#include "covsim/disease_model.hpp"
#include "support.hpp"

using namespace covsim;

namespace {

struct Micro {
  DiseaseParams params;
  AgeGroupProfiles profiles = AgeGroupProfiles::uniform();
  PrevalenceCurve curve{{0.0, 0.1, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0}};
  BedSupply beds{50, 0.7};

  Micro() {
    params.incubation_period = 2;
    params.time_to_death = 2;
    params.recovery_time = 4;
    params.hospitalization_rate = 0.1;
    params.mortality_rate = 0.1;
    params.days_in_hospital = 2;
    params.excess_mortality_multiplier = 2.0;
    params.horizon = 8;
  }
};

Persons cell(const std::map<std::string, std::string>& row, const std::string& key) { return std::stoll(row.at(key)); }

}  // namespace

TEST(DiseaseModel, MicroCountyMatchesHandTrace) {
  Micro m;
  ASSERT_TRUE(m.params.validate().empty());
  CountyState s = make_county_state("m", {0, 1000, 0});
  start_outbreak(s, 0);
  Rounder round;
  const auto rows = support::read_rows(std::filesystem::path(COVSIM_GOLDEN_DIR) / "micro_county.csv");
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& row : rows) {
    const Day day = static_cast<Day>(cell(row, "day"));
    s = step_county(s, m.curve, m.params, m.profiles, 1.0, m.beds, day, round);
    SCOPED_TRACE("day " + std::to_string(day));
    EXPECT_EQ(total(s.today.new_sick), cell(row, "new_sick"));
    EXPECT_EQ(total(s.susceptible), cell(row, "susceptible"));
    EXPECT_EQ(total(s.cumulative_sick), cell(row, "cumulative_sick"));
    EXPECT_EQ(s.active_sick, cell(row, "active_sick"));
    EXPECT_EQ(total(s.recovered), cell(row, "recovered"));
    EXPECT_EQ(s.today.new_admissions, cell(row, "new_admissions"));
    EXPECT_EQ(s.beds_filled, cell(row, "beds_filled"));
    EXPECT_EQ(s.unmet_demand, cell(row, "unmet_demand"));
    EXPECT_EQ(s.hospital_demand, cell(row, "hospital_demand"));
    EXPECT_EQ(s.today.new_deaths, cell(row, "new_deaths"));
    EXPECT_EQ(s.deaths_cumulative(), cell(row, "cumulative_deaths"));
  }
}

TEST(DiseaseModel, StepPastCurveIsHorizonExceeded) {
  Micro m;
  CountyState s = make_county_state("m", {0, 1000, 0});
  start_outbreak(s, 0);
  s.local_day = static_cast<Day>(m.curve.size());
  Rounder round;
  try {
    step_county(s, m.curve, m.params, m.profiles, 1.0, m.beds, 8, round);
    FAIL() << "expected horizon_exceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::horizon_exceeded);
  }
}

TEST(DiseaseModel, StepWithoutOutbreakIsRejected) {
  Micro m;
  const CountyState s = make_county_state("m", {0, 1000, 0});
  Rounder round;
  EXPECT_THROW(step_county(s, m.curve, m.params, m.profiles, 1.0, m.beds, 0, round), Error);
}

TEST(DiseaseModel, ZeroIncidenceLeavesCompartmentsUnchanged) {
  Micro m;
  m.curve.daily_incidence.assign(8, 0.0);
  CountyState s = make_county_state("m", {300, 1000, 200});
  start_outbreak(s, 0);
  Rounder round;
  for (Day d = 0; d < 8; ++d) s = step_county(s, m.curve, m.params, m.profiles, 1.0, m.beds, d, round);
  EXPECT_EQ(s.susceptible, (GroupCounts{300, 1000, 200}));
  EXPECT_EQ(total(s.cumulative_sick), 0);
  EXPECT_EQ(s.beds_filled, 0);
}

TEST(BedAllocation, CapacityFloorsUsableShare) {
  EXPECT_EQ(bed_capacity(100, 0.7), 30);
  EXPECT_EQ(bed_capacity(10, 0.9), 1);
  EXPECT_EQ(bed_capacity(7, 0.7), 2);
  EXPECT_EQ(bed_capacity(0, 0.7), 0);
  EXPECT_EQ(bed_capacity(100, 1.0), 0);
}

TEST(BedAllocation, UnmetIsDemandBeyondCapacity) {
  EXPECT_EQ(allocate_beds(50, 100, 0.7), (BedAllocation{30, 20}));
  EXPECT_EQ(allocate_beds(10, 100, 0.7), (BedAllocation{10, 0}));
  EXPECT_EQ(allocate_beds(10, 100, 0.7, 25), (BedAllocation{30, 5}));
  EXPECT_EQ(allocate_beds(0, 0, 0.7), (BedAllocation{0, 0}));
}

TEST(BedAllocation, SeniorsAreAdmittedFirst) {
  Micro m;
  m.params.incubation_period = 1;
  m.params.time_to_death = 20;
  m.params.recovery_time = 20;
  m.params.hospitalization_rate = 1.0;
  m.params.mortality_rate = 0.0;
  m.curve.daily_incidence = {0.5, 0.0, 0.0};
  m.beds = {40, 0.5};  // 20 usable
  CountyState s = make_county_state("m", {20, 20, 20});
  start_outbreak(s, 0);
  Rounder round;
  for (Day d = 0; d < 2; ++d) s = step_county(s, m.curve, m.params, m.profiles, 1.0, m.beds, d, round);
  // 30 patients: 10 seniors and 10 adults get beds, 10 children do not.
  EXPECT_EQ(s.today.new_admissions, 30);
  EXPECT_EQ(s.beds_filled, 20);
  EXPECT_EQ(s.unmet_demand, 10);
}

TEST(ExcessMortality, UnmetDemandOnlyAddsDeaths) {
  // Same outbreak with and without beds: all extra deaths come out of recoveries.
  Micro m;
  m.params.excess_mortality_multiplier = 4.0;
  auto final_state = [&](Persons total_beds) {
    Micro local = m;
    local.beds = {total_beds, 0.7};
    CountyState s = make_county_state("m", {0, 1000, 0});
    start_outbreak(s, 0);
    Rounder round;
    for (Day d = 0; d < 8; ++d) s = step_county(s, local.curve, local.params, local.profiles, 1.0, local.beds, d, round);
    return s;
  };
  const CountyState plenty = final_state(100000);
  const CountyState none = final_state(0);
  EXPECT_EQ(plenty.unmet_demand, 0);
  EXPECT_EQ(total(plenty.cumulative_sick), total(none.cumulative_sick));
  EXPECT_GT(none.deaths_cumulative(), plenty.deaths_cumulative());
  EXPECT_EQ(none.deaths_cumulative() + total(none.recovered), plenty.deaths_cumulative() + total(plenty.recovered));
  // Cohorts of 10, 18 and 7 patients find no bed; 30% extra mortality: round(3) + round(5.4) + round(2.1).
  EXPECT_EQ(none.deaths_cumulative() - plenty.deaths_cumulative(), 3 + 5 + 2);
}

TEST(Rounding, HalfEvenTies) {
  EXPECT_EQ(round_half_even(0.5), 0);
  EXPECT_EQ(round_half_even(1.5), 2);
  EXPECT_EQ(round_half_even(2.5), 2);
  EXPECT_EQ(round_half_even(2.5000001), 3);
  EXPECT_EQ(round_half_even(7.49), 7);
}

TEST(Rounding, StochasticIsSeededAndUnbiased) {
  Rounder a(RoundingMode::stochastic, 42), b(RoundingMode::stochastic, 42), c(RoundingMode::stochastic, 43);
  std::vector<Persons> xa, xb, xc;
  for (int k = 0; k < 1000; ++k) {
    xa.push_back(a(3.25));
    xb.push_back(b(3.25));
    xc.push_back(c(3.25));
  }
  EXPECT_EQ(xa, xb);
  EXPECT_NE(xa, xc);
  double mean = 0.0;
  for (auto v : xa) {
    EXPECT_TRUE(v == 3 || v == 4);
    mean += static_cast<double>(v) / 1000.0;
  }
  EXPECT_NEAR(mean, 3.25, 0.05);
}

TEST(DiseaseParams, ValidationListsEveryBadField) {
  DiseaseParams p;
  p.r0 = -1.0;
  p.mortality_rate = 2.0;
  p.horizon = 0;
  p.recovery_time = p.incubation_period;
  const auto d = p.validate();
  std::set<std::string> fields;
  for (const auto& x : d) fields.insert(x.field);
  EXPECT_EQ(fields, (std::set<std::string>{"disease.r0", "disease.mortality_rate", "disease.horizon", "disease.recovery_time"}));
}
