#pragma once

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "saef/costs.hpp"
#include "saef/geo.hpp"
#include "saef/qdta.hpp"
#include "saef/typology.hpp"

namespace saef {

struct LinkDailyStats {
  std::vector<double> adt;  // veh/day
  std::vector<double> vmt;  // miles
  std::vector<double> vhd;  // hours
  /// Loaded flow (veh/h) and volume over capacity, [interval][link].
  std::vector<std::vector<double>> flow;
  std::vector<std::vector<double>> vc;
};

LinkDailyStats daily_stats(const Network& net, const AssignmentResult& result);

struct MilesHours {
  double vmt = 0.0;
  double vhd = 0.0;
};

MilesHours filtered_vmt_vhd(const LinkDailyStats& stats, const std::function<bool(LinkIndex)>& keep);

/// Half-open time-of-day window in seconds after midnight. An interval
/// belongs to the window when its start lies inside it.
struct TimeWindow {
  double start_s = 0.0;
  double end_s = 0.0;
  bool contains_interval(std::size_t k, double interval_s) const;
};

inline constexpr TimeWindow kMorningPeak{7 * 3600.0, 9 * 3600.0};
inline constexpr TimeWindow kSchoolMorning{7 * 3600.0, 8 * 3600.0};

/// Total length of links with v/c >= 1 in at least one interval of `window`.
double congested_miles(const Network& net, const LinkDailyStats& stats, double interval_s, TimeWindow window);

struct TripStats {
  double avg_length_miles = 0.0;
  double avg_delay_min = 0.0;
  double avg_fuel_liters = 0.0;
  double total_fuel_liters = 0.0;
  std::size_t completed = 0;
  std::size_t force_completed = 0;
  std::size_t failed = 0;
};

/// Averages over completed trips; the total counts force-completed trips
/// too. Throws std::runtime_error when no trip completed.
TripStats trip_stats(const AssignmentResult& result);

enum class Exposure { None, Medium, High };

std::string_view to_string(Exposure e);

inline constexpr double kHighExposureAdt = 50000.0;
inline constexpr double kMediumExposureAdt = 25000.0;
inline constexpr double kSchoolRadiusM = 250.0;

/// High above 50,000; Medium on [25,000, 50,000]; None below.
Exposure exposure_for_adt(double adt);

struct SchoolExposure {
  std::string school_id;
  Exposure exposure = Exposure::None;
  double max_adt = 0.0;
  double buffer_vmt = 0.0;  // miles in the school window
  std::vector<LinkIndex> links;
};

std::vector<SchoolExposure> school_exposure(const Network& net, const LinkDailyStats& stats, double interval_s,
                                            const std::vector<School>& schools, const SpatialIndex& link_index,
                                            double radius_m = kSchoolRadiusM, TimeWindow window = kSchoolMorning);

/// Percentage of exposed schools that are minority schools; empty when no
/// school is exposed.
std::optional<double> minority_exposure_share(const std::vector<SchoolExposure>& exposures,
                                              const std::vector<School>& schools);

struct EquityShares {
  double coc_vmt = 0.0;
  double coc_vhd = 0.0;
  double coc_vmt_pct = 0.0;
  double coc_vhd_pct = 0.0;
  double coc_population_pct = 0.0;
};

/// `link_tracts[i]` is the tract of link i, if any.
EquityShares equity_shares(const LinkDailyStats& stats, const std::vector<Tract>& tracts,
                           const std::vector<std::optional<std::size_t>>& link_tracts);

std::vector<std::optional<std::size_t>> map_links_to_tracts(const Network& net, const std::vector<Tract>& tracts);

double highway_accidents(const Network& net, const LinkDailyStats& stats, const std::vector<StreetType>& types,
                         const SpfParams& spf = {});

struct Indicator {
  std::string_view theme;
  std::string_view name;
  std::string_view unit;
  std::string_view spatial_level;
  std::optional<double> value;  // empty means not applicable
};

inline constexpr std::size_t kIndicatorCount = 15;

/// Indicator names in report order.
extern const std::array<std::string_view, kIndicatorCount> kIndicatorNames;

struct IndicatorReport {
  std::array<Indicator, kIndicatorCount> rows;
  std::vector<SchoolExposure> schools;
  TripStats trips;
  EquityShares equity;
};

struct IndicatorInputs {
  const Network& net;
  const std::vector<StreetType>& types;
  const std::vector<School>& schools;
  const std::vector<Tract>& tracts;
  TimeWindow morning = kMorningPeak;
  double school_radius_m = kSchoolRadiusM;
  SpfParams spf;
};

IndicatorReport build_report(const AssignmentResult& result, const IndicatorInputs& in);

/// `theme,indicator,unit,value`; not-applicable values are written as NA.
void write_indicators(const IndicatorReport& report, const std::filesystem::path& path);
/// `school_id,exposure,max_adt,buffer_vmt_7_8am,links`
void write_school_exposure(const Network& net, const IndicatorReport& report, const std::filesystem::path& path);

}  // namespace saef
