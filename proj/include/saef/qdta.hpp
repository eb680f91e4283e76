#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "saef/costs.hpp"
#include "saef/network.hpp"

namespace saef {

/// Routing objective: user-equilibrium time, system-optimal time, system-optimal fuel.
enum class Objective { UET, SOT, SOF };

inline constexpr std::array<Objective, 3> kAllObjectives{Objective::UET, Objective::SOT, Objective::SOF};

std::string_view to_string(Objective o);    // "UET"
std::string_view file_suffix(Objective o);  // "uet"
Objective parse_objective(std::string_view s);  // case-insensitive, throws std::invalid_argument

inline constexpr double kSecondsPerDay = 86400.0;

struct TripRequest {
  std::int64_t id = 0;
  NodeId origin = 0;
  NodeId destination = 0;
  double depart_s = 0.0;  // seconds after midnight, [0, 86400)
};

/// `trip_id,origin,destination,depart_s`; validated against the network.
std::vector<TripRequest> load_trips(const std::filesystem::path& path, const Network& net);

struct SolverConfig {
  double interval_s = 900.0;
  int max_iterations = 100;
  double gap_tolerance = 1e-4;
  double line_search_tolerance = 1e-6;
  int line_search_max_iterations = 60;
  double speed_floor_mph = 5.0;
  /// Shortest-path worker threads; results do not depend on this.
  unsigned workers = 1;

  void validate() const;
  std::size_t interval_count() const;
  double interval_hours() const { return interval_s / 3600.0; }
};

/// Cost-model parameters shared by every objective.
struct CostModel {
  BprParams bpr;
  FuelParams fuel;
  /// The solver overrides the lower bound with SolverConfig::speed_floor_mph.
  FuelSpeedWindow fuel_window;
};

/// Demand between two nodes. `demand` is a trip count when produced by
/// bucket_demand and a rate (veh/h) when handed to the solver.
struct OdDemand {
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  double demand = 0.0;
};

/// Sorted by (origin, destination), one entry per pair.
using OdTable = std::vector<OdDemand>;

/// One OD table per interval, floor(depart / interval_s). Throws
/// std::invalid_argument for departures outside the day.
std::vector<OdTable> bucket_demand(const Network& net, std::span<const TripRequest> trips, double interval_s);

/// Converts trip counts into hourly rates.
OdTable to_rates(OdTable counts, double interval_hours);

/// Cost a link presents to the shortest-path step: the BPR time for UET and
/// the marginal cost of the system objective for SOT/SOF.
double assignment_cost(Objective obj, const Link& link, double flow_vph, const CostModel& model);

/// Per-link term of the objective being minimized (Beckmann integral,
/// f*c(f), or f*m(v(f))). Its flow derivative is assignment_cost.
double objective_term(Objective obj, const Link& link, double flow_vph, const CostModel& model);

struct AonResult {
  std::vector<double> flow;
  /// Least-cost path per OD entry; empty for unreachable pairs.
  std::vector<std::vector<LinkIndex>> paths;
  /// OD entry positions with no path.
  std::vector<std::size_t> unreachable;
};

/// Loads every OD's demand on its least-cost path. Equal-cost ties prefer the
/// smaller predecessor link id.
AonResult all_or_nothing(const Network& net, const OdTable& od, std::span<const double> link_costs,
                         unsigned workers = 1);

/// Single-source least-cost path, or empty when unreachable.
std::vector<LinkIndex> least_cost_path(const Network& net, NodeIndex origin, NodeIndex destination,
                                       std::span<const double> link_costs);

/// Link flows with the travel time and speed they imply under BPR.
struct FlowState {
  std::vector<double> flow;   // veh/h
  std::vector<double> time;   // hours
  std::vector<double> speed;  // mph
};

FlowState make_flow_state(const Network& net, std::vector<double> flow, const BprParams& bpr);

struct PathShare {
  std::vector<LinkIndex> links;
  double share = 0.0;
};

struct IntervalAssignment {
  FlowState state;
  /// Path decomposition per OD entry; shares sum to one for reachable pairs.
  std::vector<std::vector<PathShare>> paths;
  std::vector<std::size_t> unreachable;
  std::vector<double> gaps;        // one per iteration
  std::vector<double> objectives;  // objective value per iteration
  int iterations = 0;
  bool converged = false;
  double final_gap = 0.0;
};

/// Frank-Wolfe with exact line search for one interval. `od` holds rates in
/// veh/h. `warm_start` flows, when given, only seed the first shortest-path
/// costs so the starting point stays feasible for this OD table.
IntervalAssignment assign_interval(const Network& net, const OdTable& od, Objective obj, const SolverConfig& cfg,
                                   const CostModel& model, std::span<const double> warm_start = {});

enum class TripStatus { Completed, ForceCompleted, Failed };

std::string_view to_string(TripStatus s);
TripStatus parse_trip_status(std::string_view s);

struct TripRecord {
  std::int64_t trip_id = 0;
  std::vector<LinkId> links;
  double start_s = 0.0;
  double end_s = 0.0;
  double distance_miles = 0.0;
  double travel_time_h = 0.0;
  double free_flow_time_h = 0.0;
  double delay_h = 0.0;
  double fuel_liters = 0.0;
  TripStatus status = TripStatus::Completed;
};

/// A trip still in the network. `clock_s` is its absolute position in time;
/// it only ever sits at a node.
struct ActiveTrip {
  std::int64_t trip_id = 0;
  NodeIndex current = 0;
  NodeIndex destination = 0;
  double depart_s = 0.0;
  double clock_s = 0.0;
  std::vector<LinkIndex> planned;
  std::vector<LinkIndex> traversed;
  double distance_miles = 0.0;
  double time_h = 0.0;
  double free_flow_h = 0.0;
  double fuel_liters = 0.0;
};

struct AdvanceOutcome {
  std::vector<TripRecord> finished;  // completed or failed
  std::vector<ActiveTrip> residual;
  /// Vehicles that entered each link during the interval.
  std::vector<double> link_entries;
};

/// OD table of trip counts for the trips that move in an interval: those
/// whose clock is before the interval end.
OdTable active_demand(std::span<const ActiveTrip> active, double interval_end_s);

/// Moves each participating trip along one of its OD's assigned paths at the
/// assigned link times until the interval ends. Trips of an OD are spread
/// over the path decomposition in proportion to the path shares (largest
/// remainder, trips in id order). A trip always crosses at least one link.
AdvanceOutcome advance_trips(const Network& net, const IntervalAssignment& assignment, const OdTable& od,
                             std::vector<ActiveTrip> active, double interval_start_s, double interval_s,
                             const CostModel& model);

struct IntervalLog {
  std::size_t interval = 0;
  std::size_t od_pairs = 0;
  std::size_t unreachable = 0;
  int iterations = 0;
  bool converged = true;
  double final_gap = 0.0;
  std::vector<double> gaps;
};

struct AssignmentResult {
  Objective objective = Objective::UET;
  double interval_s = 900.0;
  /// Network loading per interval: vehicles that entered each link during the
  /// interval, as an hourly rate, with BPR time and speed.
  std::vector<FlowState> intervals;
  /// Solver flows per interval (veh/h), before trips are moved.
  std::vector<std::vector<double>> assigned_flow;
  std::vector<TripRecord> trips;  // sorted by trip id
  std::vector<IntervalLog> convergence;
  std::vector<std::string> warnings;

  bool all_converged() const;
};

/// Full day: each interval assigns new departures plus residual trips, then
/// moves trips. Trips still travelling after the last interval finish their
/// remaining path at free flow and are flagged ForceCompleted; that travel
/// is loaded into the last interval.
AssignmentResult run_day(const Network& net, std::span<const TripRequest> trips, Objective obj,
                         const SolverConfig& cfg, const CostModel& model);

/// `flows_<objective>.csv`: interval,link_id,flow_vph,time_h,speed_mph for
/// links with nonzero flow.
void write_flows(const Network& net, const AssignmentResult& result, const std::filesystem::path& path);
/// `trips_<objective>.csv`
void write_trips(const AssignmentResult& result, const std::filesystem::path& path);
/// Per-interval convergence summary.
void write_convergence(const AssignmentResult& result, const std::filesystem::path& path);

/// Rebuilds the loading and trip records written by write_flows/write_trips.
AssignmentResult read_assignment(const Network& net, Objective obj, const SolverConfig& cfg,
                                 const std::filesystem::path& flows_csv, const std::filesystem::path& trips_csv);

}  // namespace saef
