#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "saef/csv.hpp"
#include "saef/indicators.hpp"

using namespace saef;

namespace {

// A result whose interval `k` carries `flow` on every link with the given
// time multiplier.
AssignmentResult flat_result(const Network& net, std::size_t k, double flow, double time_factor = 1.0) {
  AssignmentResult r;
  r.interval_s = 900.0;
  for (std::size_t i = 0; i < 96; ++i) {
    FlowState s;
    s.flow.assign(net.link_count(), i == k ? flow : 0.0);
    for (const Link& l : net.links()) {
      s.time.push_back(free_flow_time(l) * (i == k ? time_factor : 1.0));
      s.speed.push_back(l.length_miles / s.time.back());
    }
    r.intervals.push_back(std::move(s));
  }
  return r;
}

TripRecord trip(std::int64_t id, double miles, double delay_h, double fuel, TripStatus st = TripStatus::Completed) {
  TripRecord t;
  t.trip_id = id;
  t.distance_miles = miles;
  t.delay_h = delay_h;
  t.fuel_liters = fuel;
  t.status = st;
  return t;
}

}  // namespace

TEST_CASE("daily stats hand values") {
  // 2-mile link, 400 veh/h for one 15-minute interval.
  const Network net = fixtures::line(2, 2 * kMetersPerMile, 40.0, 1000.0);
  const auto s = daily_stats(net, flat_result(net, 3, 400.0));
  CHECK(s.adt[0] == doctest::Approx(100.0));
  CHECK(s.vmt[0] == doctest::Approx(200.0));
  CHECK(s.vhd[0] == doctest::Approx(0.0));
  CHECK(s.vc[3][0] == doctest::Approx(0.4));

  // c0 = 0.05 h, time doubled: delay 0.05 h for 100 vehicles.
  const auto c = daily_stats(net, flat_result(net, 3, 400.0, 2.0));
  CHECK(c.vhd[0] == doctest::Approx(5.0));

  const auto z = daily_stats(net, flat_result(net, 0, 0.0));
  CHECK(z.adt[0] == 0.0);
  CHECK(z.vmt[0] == 0.0);
}

TEST_CASE("filtered sums partition the total") {
  const auto g = fixtures::grid(8);
  const ParcelSet parcels(g.parcels);
  const auto types = classify_network(g.net, parcels);
  const auto r = run_day(g.net, fixtures::grid_trips(g, 800, 8), Objective::UET, SolverConfig{}, CostModel{});
  const auto s = daily_stats(g.net, r);
  const MilesHours total = filtered_vmt_vhd(s, [](LinkIndex) { return true; });
  MilesHours sum;
  for (StreetType t : kAllStreetTypes) {
    const auto part = filtered_vmt_vhd(s, [&](LinkIndex l) { return types[l] == t; });
    sum.vmt += part.vmt;
    sum.vhd += part.vhd;
  }
  CHECK(sum.vmt == doctest::Approx(total.vmt).epsilon(1e-9));
  CHECK(sum.vhd == doctest::Approx(total.vhd).epsilon(1e-9));
  double adt_len = 0.0;
  for (std::size_t a = 0; a < s.adt.size(); ++a) adt_len += s.adt[a] * g.net.link(static_cast<LinkIndex>(a)).length_miles;
  CHECK(total.vmt == doctest::Approx(adt_len).epsilon(1e-9));
  CHECK(filtered_vmt_vhd(s, [](LinkIndex) { return false; }).vmt == 0.0);
}

TEST_CASE("congested miles counts v/c >= 1 inside the window") {
  const Network net = fixtures::line(3, kMetersPerMile, 30.0, 1000.0);
  // Interval 28 starts at 07:00.
  auto r = flat_result(net, 28, 1000.0);
  CHECK(congested_miles(net, daily_stats(net, r), 900.0, kMorningPeak) == doctest::Approx(2.0));
  r = flat_result(net, 28, 990.0);
  CHECK(congested_miles(net, daily_stats(net, r), 900.0, kMorningPeak) == 0.0);
  r = flat_result(net, 36, 5000.0);  // 09:00 is outside [07:00, 09:00)
  CHECK(congested_miles(net, daily_stats(net, r), 900.0, kMorningPeak) == 0.0);
  r = flat_result(net, 35, 5000.0);
  CHECK(congested_miles(net, daily_stats(net, r), 900.0, kMorningPeak) == doctest::Approx(2.0));
}

TEST_CASE("trip statistics") {
  AssignmentResult r;
  r.trips = {trip(1, 4.0, 0.0, 0.3), trip(2, 6.0, 0.1, 0.5), trip(3, 100.0, 1.0, 7.0, TripStatus::ForceCompleted),
             trip(4, 0.0, 0.0, 0.0, TripStatus::Failed)};
  const TripStats s = trip_stats(r);
  CHECK(s.avg_length_miles == doctest::Approx(5.0));
  CHECK(s.avg_delay_min == doctest::Approx(3.0));
  CHECK(s.avg_fuel_liters == doctest::Approx(0.4));
  CHECK(s.total_fuel_liters == doctest::Approx(7.8));
  CHECK(s.completed == 2);
  CHECK(s.force_completed == 1);
  CHECK(s.failed == 1);
  r.trips = {trip(1, 1.0, 0.0, 0.1, TripStatus::Failed)};
  CHECK_THROWS_AS(trip_stats(r), std::runtime_error);
}

TEST_CASE("free-flow trip over one mile at 30 mph") {
  const Network net = fixtures::line(2, kMetersPerMile, 30.0, 1e6);
  const auto r = run_day(net, std::vector<TripRequest>{{1, 1, 2, 3600.0}}, Objective::UET, SolverConfig{}, CostModel{});
  const TripStats s = trip_stats(r);
  CHECK(s.avg_delay_min == doctest::Approx(0.0).scale(1.0));
  CHECK(s.avg_fuel_liters == doctest::Approx(0.0711553).epsilon(1e-6));
}

TEST_CASE("exposure thresholds") {
  CHECK(exposure_for_adt(60000) == Exposure::High);
  CHECK(exposure_for_adt(50001) == Exposure::High);
  CHECK(exposure_for_adt(50000) == Exposure::Medium);
  CHECK(exposure_for_adt(30000) == Exposure::Medium);
  CHECK(exposure_for_adt(25000) == Exposure::Medium);
  CHECK(exposure_for_adt(24999) == Exposure::None);
}

TEST_CASE("school exposure uses the 250 m buffer and the 7-8 am window") {
  const Network net = fixtures::line(2, 1000.0, 30.0, 1000.0);
  const SpatialIndex idx = SpatialIndex::over_links(net);
  const std::vector<School> schools{{"near", {500, 200}, 80}, {"far", {500, 300}, 10}};
  // 60,000 veh/day needs 240,000 veh/h in one interval; place it at 07:15.
  auto r = flat_result(net, 29, 240000.0);
  const auto s = daily_stats(net, r);
  const auto e = school_exposure(net, s, 900.0, schools, idx);
  REQUIRE(e.size() == 2);
  CHECK(e[0].exposure == Exposure::High);
  CHECK(e[0].buffer_vmt == doctest::Approx(60000.0 * net.link(0).length_miles));
  CHECK(e[1].exposure == Exposure::None);
  CHECK(e[1].links.empty());
  CHECK(minority_exposure_share(e, schools) == doctest::Approx(100.0));

  // Same volume at 08:00 is outside the VMT window but still counts for ADT.
  r = flat_result(net, 32, 240000.0);
  const auto e2 = school_exposure(net, daily_stats(net, r), 900.0, schools, idx);
  CHECK(e2[0].exposure == Exposure::High);
  CHECK(e2[0].buffer_vmt == 0.0);
}

TEST_CASE("exposure never drops when flows rise") {
  const auto g = fixtures::grid(8, 100.0);
  const SpatialIndex idx = SpatialIndex::over_links(g.net);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0, 300000);
  std::vector<School> schools;
  for (int i = 0; i < 20; ++i) schools.push_back({std::to_string(i), {u(rng) / 500, u(rng) / 500}, 50});
  for (int trial = 0; trial < 20; ++trial) {
    AssignmentResult r = flat_result(g.net, 10, 0.0);
    for (double& f : r.intervals[10].flow) f = u(rng);
    const auto before = school_exposure(g.net, daily_stats(g.net, r), 900.0, schools, idx);
    const auto bump = static_cast<std::size_t>(rng() % g.net.link_count());
    r.intervals[10].flow[bump] += u(rng);
    const auto after = school_exposure(g.net, daily_stats(g.net, r), 900.0, schools, idx);
    for (std::size_t i = 0; i < schools.size(); ++i) CHECK(after[i].exposure >= before[i].exposure);
  }
}

TEST_CASE("minority share") {
  const std::vector<School> schools{{"a", {}, 80}, {"b", {}, 10}, {"c", {}, 90}};
  std::vector<SchoolExposure> e(3);
  CHECK_FALSE(minority_exposure_share(e, schools).has_value());
  e[0].exposure = Exposure::Medium;
  e[1].exposure = Exposure::High;
  CHECK(*minority_exposure_share(e, schools) == doctest::Approx(50.0));
  e[1].exposure = Exposure::None;
  e[2].exposure = Exposure::High;
  CHECK(*minority_exposure_share(e, schools) == doctest::Approx(100.0));
}

TEST_CASE("equity shares") {
  LinkDailyStats s;
  s.vmt = {40, 60};
  s.vhd = {1, 3};
  const std::vector<Tract> tracts{{"coc", {}, 32, true}, {"rest", {}, 68, false}};
  const auto e = equity_shares(s, tracts, {0, 1});
  CHECK(e.coc_vmt == 40);
  CHECK(e.coc_vmt_pct == doctest::Approx(40.0));
  CHECK(e.coc_vhd_pct == doctest::Approx(25.0));
  CHECK(e.coc_population_pct == doctest::Approx(32.0));
  CHECK(e.coc_vmt_pct > e.coc_population_pct);
  const auto all = equity_shares(s, tracts, {0, 0});
  CHECK(all.coc_vmt_pct == doctest::Approx(100.0));
  const std::vector<Tract> none{{"x", {}, 5, false}};
  const auto n = equity_shares(s, none, {0, std::nullopt});
  CHECK(n.coc_vmt == 0.0);
  CHECK(n.coc_population_pct == 0.0);
}

TEST_CASE("highway accidents") {
  const Network net = fixtures::line(3, kMetersPerMile, 65.0, 4000.0);
  LinkDailyStats s;
  s.adt = {10000, 10000};
  std::vector<StreetType> types{StreetType::Others, StreetType::Others};
  CHECK(highway_accidents(net, s, types) == 0.0);
  types = {StreetType::Highway, StreetType::Others};
  const double one = highway_accidents(net, s, types);
  CHECK(one == doctest::Approx(spf_accidents(1, net.link(0).length_miles, 10000)));
  types = {StreetType::Highway, StreetType::Highway};
  CHECK(highway_accidents(net, s, types) == doctest::Approx(2 * one));
}

TEST_CASE("zero-demand report") {
  const auto g = fixtures::grid(6);
  const ParcelSet parcels(g.parcels);
  const auto types = classify_network(g.net, parcels);
  const auto r = run_day(g.net, std::vector<TripRequest>{}, Objective::UET, SolverConfig{}, CostModel{});
  const IndicatorReport rep = build_report(r, {g.net, types, g.schools, g.tracts, kMorningPeak, kSchoolRadiusM, SpfParams{}});
  for (const Indicator& i : rep.rows) {
    if (i.name == "Average trip length" || i.name == "Average trip delay" ||
        i.name == "Average trip fuel consumption" ||
        i.name == "Minority schools near high and medium traffic streets") {
      CHECK_FALSE(i.value.has_value());
    } else {
      REQUIRE(i.value.has_value());
      CHECK(*i.value == 0.0);
    }
  }
}

TEST_CASE("report fields agree with the single operations") {
  const auto g = fixtures::grid(8);
  const ParcelSet parcels(g.parcels);
  const auto types = classify_network(g.net, parcels);
  const auto r = run_day(g.net, fixtures::grid_trips(g, 1500, 5), Objective::SOT, SolverConfig{}, CostModel{});
  const IndicatorReport rep = build_report(r, {g.net, types, g.schools, g.tracts, kMorningPeak, kSchoolRadiusM, SpfParams{}});
  const auto s = daily_stats(g.net, r);
  const auto ts = trip_stats(r);
  CHECK(*rep.rows[5].value == filtered_vmt_vhd(s, [](LinkIndex) { return true; }).vmt);
  CHECK(*rep.rows[0].value ==
        filtered_vmt_vhd(s, [&](LinkIndex l) { return types[l] == StreetType::NeighborhoodResidential; }).vmt);
  CHECK(*rep.rows[4].value == highway_accidents(g.net, s, types));
  CHECK(*rep.rows[7].value == congested_miles(g.net, s, 900.0, kMorningPeak));
  CHECK(*rep.rows[8].value == ts.avg_length_miles);
  CHECK(*rep.rows[13].value == ts.total_fuel_liters);
  CHECK(*rep.rows[11].value == equity_shares(s, g.tracts, map_links_to_tracts(g.net, g.tracts)).coc_vmt);
  for (std::size_t i = 0; i < kIndicatorCount; ++i) CHECK(rep.rows[i].name == kIndicatorNames[i]);

  const auto dir = fixtures::scratch_dir("indicators_out");
  write_indicators(rep, dir / "a.csv");
  write_indicators(build_report(r, {g.net, types, g.schools, g.tracts, kMorningPeak, kSchoolRadiusM, SpfParams{}}), dir / "b.csv");
  CHECK(fixtures::read_file(dir / "a.csv") == fixtures::read_file(dir / "b.csv"));
  const CsvTable t = read_csv(dir / "a.csv");
  CHECK(t.header == std::vector<std::string>{"theme", "indicator", "unit", "value"});
  CHECK(t.rows.size() == kIndicatorCount);
  write_school_exposure(g.net, rep, dir / "schools.csv");
  CHECK(read_csv(dir / "schools.csv").rows.size() == g.schools.size());
}
