#include "saef/indicators.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "saef/csv.hpp"

namespace saef {

const std::array<std::string_view, kIndicatorCount> kIndicatorNames{
    "VMT on neighborhood residential streets",
    "VHD on neighborhood residential streets",
    "Number of schools near high and medium traffic streets",
    "VMT near schools in morning hours",
    "Estimated number of highway accidents/year",
    "VMT",
    "VHD",
    "Congested network miles in morning",
    "Average trip length",
    "Average trip delay",
    "Minority schools near high and medium traffic streets",
    "VMT on disadvantaged communities",
    "VHD on disadvantaged communities",
    "Total fuel consumption",
    "Average trip fuel consumption",
};

LinkDailyStats daily_stats(const Network& net, const AssignmentResult& result) {
  const std::size_t L = net.link_count();
  const double h = result.interval_s / 3600.0;
  LinkDailyStats s;
  s.adt.assign(L, 0.0);
  s.vmt.assign(L, 0.0);
  s.vhd.assign(L, 0.0);
  s.flow.reserve(result.intervals.size());
  s.vc.reserve(result.intervals.size());
  for (const FlowState& st : result.intervals) {
    if (st.flow.size() != L) throw std::invalid_argument("flow vector size does not match the network");
    std::vector<double> vc(L);
    for (std::size_t a = 0; a < L; ++a) {
      const Link& link = net.link(static_cast<LinkIndex>(a));
      const double vehicles = st.flow[a] * h;
      s.adt[a] += vehicles;
      s.vhd[a] += vehicles * (st.time[a] - free_flow_time(link));
      vc[a] = st.flow[a] / link.capacity_vph;
    }
    s.flow.push_back(st.flow);
    s.vc.push_back(std::move(vc));
  }
  for (std::size_t a = 0; a < L; ++a) s.vmt[a] = s.adt[a] * net.link(static_cast<LinkIndex>(a)).length_miles;
  return s;
}

MilesHours filtered_vmt_vhd(const LinkDailyStats& stats, const std::function<bool(LinkIndex)>& keep) {
  MilesHours out;
  for (std::size_t a = 0; a < stats.vmt.size(); ++a) {
    if (!keep(static_cast<LinkIndex>(a))) continue;
    out.vmt += stats.vmt[a];
    out.vhd += stats.vhd[a];
  }
  return out;
}

bool TimeWindow::contains_interval(std::size_t k, double interval_s) const {
  const double start = static_cast<double>(k) * interval_s;
  return start >= start_s && start < end_s;
}

double congested_miles(const Network& net, const LinkDailyStats& stats, double interval_s, TimeWindow window) {
  double miles = 0.0;
  for (std::size_t a = 0; a < net.link_count(); ++a) {
    for (std::size_t k = 0; k < stats.vc.size(); ++k) {
      if (window.contains_interval(k, interval_s) && stats.vc[k][a] >= 1.0) {
        miles += net.link(static_cast<LinkIndex>(a)).length_miles;
        break;
      }
    }
  }
  return miles;
}

TripStats trip_stats(const AssignmentResult& result) {
  TripStats s;
  double length = 0.0, delay = 0.0, fuel = 0.0;
  for (const TripRecord& t : result.trips) {
    switch (t.status) {
      case TripStatus::Completed:
        ++s.completed;
        length += t.distance_miles;
        delay += t.delay_h;
        fuel += t.fuel_liters;
        s.total_fuel_liters += t.fuel_liters;
        break;
      case TripStatus::ForceCompleted:
        ++s.force_completed;
        s.total_fuel_liters += t.fuel_liters;
        break;
      case TripStatus::Failed: ++s.failed; break;
    }
  }
  if (s.completed == 0) throw std::runtime_error("no completed trips");
  const auto n = static_cast<double>(s.completed);
  s.avg_length_miles = length / n;
  s.avg_delay_min = delay * 60.0 / n;
  s.avg_fuel_liters = fuel / n;
  return s;
}

std::string_view to_string(Exposure e) {
  switch (e) {
    case Exposure::None: return "None";
    case Exposure::Medium: return "Medium";
    case Exposure::High: return "High";
  }
  return "None";
}

Exposure exposure_for_adt(double adt) {
  if (adt > kHighExposureAdt) return Exposure::High;
  if (adt >= kMediumExposureAdt) return Exposure::Medium;
  return Exposure::None;
}

std::vector<SchoolExposure> school_exposure(const Network& net, const LinkDailyStats& stats, double interval_s,
                                            const std::vector<School>& schools, const SpatialIndex& link_index,
                                            double radius_m, TimeWindow window) {
  const double h = interval_s / 3600.0;
  std::vector<SchoolExposure> out;
  out.reserve(schools.size());
  for (const School& school : schools) {
    SchoolExposure e;
    e.school_id = school.id;
    e.links = links_within_radius(school.location, radius_m, net, link_index);
    for (LinkIndex l : e.links) {
      e.max_adt = std::max(e.max_adt, stats.adt[l]);
      for (std::size_t k = 0; k < stats.vc.size(); ++k) {
        if (!window.contains_interval(k, interval_s)) continue;
        const Link& link = net.link(l);
        e.buffer_vmt += stats.flow[k][l] * h * link.length_miles;
      }
    }
    e.exposure = exposure_for_adt(e.max_adt);
    out.push_back(std::move(e));
  }
  return out;
}

std::optional<double> minority_exposure_share(const std::vector<SchoolExposure>& exposures,
                                              const std::vector<School>& schools) {
  if (exposures.size() != schools.size()) throw std::invalid_argument("one exposure per school expected");
  std::size_t exposed = 0, minority = 0;
  for (std::size_t i = 0; i < schools.size(); ++i) {
    if (exposures[i].exposure == Exposure::None) continue;
    ++exposed;
    if (schools[i].is_minority()) ++minority;
  }
  if (exposed == 0) return std::nullopt;
  return 100.0 * static_cast<double>(minority) / static_cast<double>(exposed);
}

EquityShares equity_shares(const LinkDailyStats& stats, const std::vector<Tract>& tracts,
                           const std::vector<std::optional<std::size_t>>& link_tracts) {
  if (link_tracts.size() != stats.vmt.size()) throw std::invalid_argument("one tract slot per link expected");
  EquityShares e;
  double vmt = 0.0, vhd = 0.0;
  for (std::size_t a = 0; a < stats.vmt.size(); ++a) {
    vmt += stats.vmt[a];
    vhd += stats.vhd[a];
    if (link_tracts[a] && tracts.at(*link_tracts[a]).is_coc) {
      e.coc_vmt += stats.vmt[a];
      e.coc_vhd += stats.vhd[a];
    }
  }
  double pop = 0.0, coc_pop = 0.0;
  for (const Tract& t : tracts) {
    pop += t.population;
    if (t.is_coc) coc_pop += t.population;
  }
  e.coc_vmt_pct = vmt > 0.0 ? 100.0 * e.coc_vmt / vmt : 0.0;
  e.coc_vhd_pct = vhd > 0.0 ? 100.0 * e.coc_vhd / vhd : 0.0;
  e.coc_population_pct = pop > 0.0 ? 100.0 * coc_pop / pop : 0.0;
  return e;
}

std::vector<std::optional<std::size_t>> map_links_to_tracts(const Network& net, const std::vector<Tract>& tracts) {
  std::vector<Ring> rings;
  rings.reserve(tracts.size());
  for (const Tract& t : tracts) rings.push_back(t.ring);
  const SpatialIndex idx = SpatialIndex::over_rings(rings);
  std::vector<std::optional<std::size_t>> out;
  out.reserve(net.link_count());
  for (const Link& l : net.links()) out.push_back(link_tract(l, tracts, idx));
  return out;
}

double highway_accidents(const Network& net, const LinkDailyStats& stats, const std::vector<StreetType>& types,
                         const SpfParams& spf) {
  if (types.size() != net.link_count()) throw std::invalid_argument("one street type per link expected");
  double total = 0.0;
  for (std::size_t a = 0; a < net.link_count(); ++a) {
    if (types[a] != StreetType::Highway) continue;
    const Link& l = net.link(static_cast<LinkIndex>(a));
    total += spf_accidents(l.lanes, l.length_miles, stats.adt[a], spf);
  }
  return total;
}

IndicatorReport build_report(const AssignmentResult& result, const IndicatorInputs& in) {
  const Network& net = in.net;
  if (in.types.size() != net.link_count()) throw std::invalid_argument("one street type per link expected");
  const LinkDailyStats stats = daily_stats(net, result);
  const SpatialIndex link_index = SpatialIndex::over_links(net);

  IndicatorReport r;
  const MilesHours residential = filtered_vmt_vhd(
      stats, [&](LinkIndex l) { return in.types[l] == StreetType::NeighborhoodResidential; });
  const MilesHours total = filtered_vmt_vhd(stats, [](LinkIndex) { return true; });

  r.schools = school_exposure(net, stats, result.interval_s, in.schools, link_index, in.school_radius_m);
  double exposed = 0.0;
  std::vector<LinkIndex> near_school;
  for (const SchoolExposure& e : r.schools) {
    if (e.exposure != Exposure::None) exposed += 1.0;
    near_school.insert(near_school.end(), e.links.begin(), e.links.end());
  }
  // A link inside two buffers is counted once.
  std::sort(near_school.begin(), near_school.end());
  near_school.erase(std::unique(near_school.begin(), near_school.end()), near_school.end());
  const double h = result.interval_s / 3600.0;
  double school_vmt = 0.0;
  for (LinkIndex l : near_school) {
    const Link& link = net.link(l);
    for (std::size_t k = 0; k < stats.flow.size(); ++k) {
      if (kSchoolMorning.contains_interval(k, result.interval_s)) {
        school_vmt += stats.flow[k][l] * h * link.length_miles;
      }
    }
  }

  std::optional<double> avg_length, avg_delay, avg_fuel;
  double total_fuel = 0.0;
  for (const TripRecord& t : result.trips) {
    if (t.status != TripStatus::Failed) total_fuel += t.fuel_liters;
  }
  const bool any_completed = std::any_of(result.trips.begin(), result.trips.end(),
                                         [](const TripRecord& t) { return t.status == TripStatus::Completed; });
  if (any_completed) {
    r.trips = trip_stats(result);
    avg_length = r.trips.avg_length_miles;
    avg_delay = r.trips.avg_delay_min;
    avg_fuel = r.trips.avg_fuel_liters;
    total_fuel = r.trips.total_fuel_liters;
  } else {
    for (const TripRecord& t : result.trips) {
      if (t.status == TripStatus::ForceCompleted) ++r.trips.force_completed;
      if (t.status == TripStatus::Failed) ++r.trips.failed;
    }
    r.trips.total_fuel_liters = total_fuel;
  }

  r.equity = equity_shares(stats, in.tracts, map_links_to_tracts(net, in.tracts));

  const auto row = [&](std::size_t i, std::string_view theme, std::string_view unit, std::string_view level,
                       std::optional<double> v) { r.rows[i] = {theme, kIndicatorNames[i], unit, level, v}; };
  row(0, "Neighborhood", "miles", "City", residential.vmt);
  row(1, "Neighborhood", "hours", "City", residential.vhd);
  row(2, "Neighborhood", "number", "City", exposed);
  row(3, "Neighborhood", "miles", "City", school_vmt);
  row(4, "Safety", "accidents/year", "City", highway_accidents(net, stats, in.types, in.spf));
  row(5, "Mobility", "miles", "City", total.vmt);
  row(6, "Mobility", "hours", "City", total.vhd);
  row(7, "Mobility", "miles", "City", congested_miles(net, stats, result.interval_s, in.morning));
  row(8, "Mobility", "miles", "Individual", avg_length);
  row(9, "Mobility", "minutes", "Individual", avg_delay);
  row(10, "Equity", "%", "City", minority_exposure_share(r.schools, in.schools));
  row(11, "Equity", "miles", "Census tract", r.equity.coc_vmt);
  row(12, "Equity", "hours", "Census tract", r.equity.coc_vhd);
  row(13, "Environment", "litres", "City", total_fuel);
  row(14, "Environment", "litres", "Individual", avg_fuel);
  return r;
}

void write_indicators(const IndicatorReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "theme,indicator,unit,value\n";
  for (const Indicator& i : report.rows) {
    write_csv_row(out, {std::string(i.theme), std::string(i.name), std::string(i.unit),
                        i.value ? format_double(*i.value) : std::string("NA")});
  }
}

void write_school_exposure(const Network& net, const IndicatorReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "school_id,exposure,max_adt,buffer_vmt_7_8am,links\n";
  for (const SchoolExposure& e : report.schools) {
    std::string links;
    for (std::size_t i = 0; i < e.links.size(); ++i) {
      if (i) links += ' ';
      links += std::to_string(net.link(e.links[i]).id);
    }
    write_csv_row(out, {e.school_id, std::string(to_string(e.exposure)), format_double(e.max_adt),
                        format_double(e.buffer_vmt), links});
  }
}

}  // namespace saef
