#include "saef/qdta.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "saef/csv.hpp"

namespace saef {

namespace {

constexpr LinkIndex kNoLink = std::numeric_limits<LinkIndex>::max();

// Dijkstra cannot take non-positive weights; SOF marginals can dip below
// zero for very fast links.
constexpr double kMinPathCost = 1e-12;

bool od_less(const OdDemand& a, const OdDemand& b) {
  return a.origin != b.origin ? a.origin < b.origin : a.destination < b.destination;
}

class ShortestPathTree {
 public:
  explicit ShortestPathTree(std::size_t nodes)
      : dist_(nodes), pred_(nodes), settled_(nodes), target_(nodes) {}

  // Grows the tree from `origin` until every target is settled.
  void run(const Network& net, NodeIndex origin, std::span<const double> costs, std::span<const NodeIndex> targets) {
    std::fill(dist_.begin(), dist_.end(), std::numeric_limits<double>::infinity());
    std::fill(pred_.begin(), pred_.end(), kNoLink);
    std::fill(settled_.begin(), settled_.end(), 0);
    std::fill(target_.begin(), target_.end(), 0);
    std::size_t remaining = 0;
    for (NodeIndex t : targets) {
      if (!target_[t]) {
        target_[t] = 1;
        ++remaining;
      }
    }

    using Entry = std::pair<double, NodeIndex>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist_[origin] = 0.0;
    heap.emplace(0.0, origin);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (settled_[u] || d > dist_[u]) continue;
      settled_[u] = 1;
      if (target_[u] && --remaining == 0) break;
      for (LinkIndex l : net.outgoing(u)) {
        const NodeIndex v = net.head(l);
        if (settled_[v]) continue;
        const double nd = d + costs[l];
        if (nd < dist_[v] || (nd == dist_[v] && net.link(l).id < net.link(pred_[v]).id)) {
          const bool improved = nd < dist_[v];
          dist_[v] = nd;
          pred_[v] = l;
          if (improved) heap.emplace(nd, v);
        }
      }
    }
  }

  bool reached(NodeIndex n) const { return settled_[n] != 0; }

  std::vector<LinkIndex> path_to(const Network& net, NodeIndex origin, NodeIndex dest) const {
    std::vector<LinkIndex> path;
    if (!reached(dest)) return path;
    for (NodeIndex n = dest; n != origin;) {
      const LinkIndex l = pred_[n];
      path.push_back(l);
      n = net.tail(l);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

 private:
  std::vector<double> dist_;
  std::vector<LinkIndex> pred_;
  std::vector<char> settled_;
  std::vector<char> target_;
};

// Static chunking over [0, n); each worker gets its own id.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    fn(std::size_t{0}, n, 0u);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t b = std::min(n, w * chunk), e = std::min(n, b + chunk);
    pool.emplace_back([&fn, b, e, w] { fn(b, e, w); });
  }
  for (auto& t : pool) t.join();
}

std::vector<double> link_costs(const Network& net, std::span<const double> flow, Objective obj, const CostModel& m) {
  std::vector<double> c(net.link_count());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c[i] = assignment_cost(obj, net.link(static_cast<LinkIndex>(i)), flow.empty() ? 0.0 : flow[i], m);
  }
  return c;
}

double total_objective(const Network& net, std::span<const double> flow, Objective obj, const CostModel& m) {
  double z = 0.0;
  for (std::size_t i = 0; i < flow.size(); ++i) {
    if (flow[i] != 0.0) z += objective_term(obj, net.link(static_cast<LinkIndex>(i)), flow[i], m);
  }
  return z;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::UET: return "UET";
    case Objective::SOT: return "SOT";
    case Objective::SOF: return "SOF";
  }
  return "UET";
}

std::string_view file_suffix(Objective o) {
  switch (o) {
    case Objective::UET: return "uet";
    case Objective::SOT: return "sot";
    case Objective::SOF: return "sof";
  }
  return "uet";
}

Objective parse_objective(std::string_view s) {
  const std::string l = lower(s);
  if (l == "uet") return Objective::UET;
  if (l == "sot") return Objective::SOT;
  if (l == "sof") return Objective::SOF;
  throw std::invalid_argument("unknown objective '" + std::string(s) + "' (expected uet, sot or sof)");
}

std::string_view to_string(TripStatus s) {
  switch (s) {
    case TripStatus::Completed: return "completed";
    case TripStatus::ForceCompleted: return "force_completed";
    case TripStatus::Failed: return "failed";
  }
  return "failed";
}

TripStatus parse_trip_status(std::string_view s) {
  if (s == "completed") return TripStatus::Completed;
  if (s == "force_completed") return TripStatus::ForceCompleted;
  if (s == "failed") return TripStatus::Failed;
  throw std::invalid_argument("unknown trip status '" + std::string(s) + "'");
}

void SolverConfig::validate() const {
  if (!(interval_s > 0.0) || interval_s > kSecondsPerDay) throw std::invalid_argument("interval_s must be in (0, 86400]");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be positive");
  if (!(gap_tolerance > 0.0 && gap_tolerance < 1.0)) throw std::invalid_argument("gap_tolerance must be in (0, 1)");
  if (!(line_search_tolerance > 0.0 && line_search_tolerance < 1.0)) {
    throw std::invalid_argument("line_search_tolerance must be in (0, 1)");
  }
  if (line_search_max_iterations < 1) throw std::invalid_argument("line_search_max_iterations must be positive");
  if (!(speed_floor_mph >= 1.0 && speed_floor_mph < 90.0)) {
    throw std::invalid_argument("speed_floor_mph must be in [1, 90)");
  }
  if (workers < 1) throw std::invalid_argument("workers must be positive");
}

std::size_t SolverConfig::interval_count() const {
  return static_cast<std::size_t>(std::ceil(kSecondsPerDay / interval_s - 1e-9));
}

std::vector<TripRequest> load_trips(const std::filesystem::path& path, const Network& net) {
  const CsvTable t = read_csv(path);
  const std::size_t c_id = t.column("trip_id"), c_o = t.column("origin"), c_d = t.column("destination"),
                    c_dep = t.column("depart_s");
  std::vector<TripRequest> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    const std::string where = "row " + std::to_string(row.line) + " of " + t.source;
    TripRequest r{field_int(t, row, c_id), field_int(t, row, c_o), field_int(t, row, c_d),
                  field_double(t, row, c_dep)};
    if (!net.find_node(r.origin)) throw LoadError("unknown origin node, " + where);
    if (!net.find_node(r.destination)) throw LoadError("unknown destination node, " + where);
    if (r.origin == r.destination) throw LoadError("origin equals destination, " + where);
    if (!(r.depart_s >= 0.0 && r.depart_s < kSecondsPerDay)) throw LoadError("depart_s outside [0, 86400), " + where);
    out.push_back(r);
  }
  return out;
}

std::vector<OdTable> bucket_demand(const Network& net, std::span<const TripRequest> trips, double interval_s) {
  if (!(interval_s > 0.0)) throw std::invalid_argument("interval_s must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(kSecondsPerDay / interval_s - 1e-9));
  std::vector<OdTable> buckets(n);
  for (const TripRequest& t : trips) {
    if (!(t.depart_s >= 0.0 && t.depart_s < kSecondsPerDay)) {
      throw std::invalid_argument("trip " + std::to_string(t.id) + " departs outside [0, 86400)");
    }
    const auto k = std::min(n - 1, static_cast<std::size_t>(std::floor(t.depart_s / interval_s)));
    buckets[k].push_back({net.node_index(t.origin), net.node_index(t.destination), 1.0});
  }
  for (OdTable& b : buckets) {
    std::sort(b.begin(), b.end(), od_less);
    OdTable merged;
    for (const OdDemand& d : b) {
      if (!merged.empty() && merged.back().origin == d.origin && merged.back().destination == d.destination) {
        merged.back().demand += d.demand;
      } else {
        merged.push_back(d);
      }
    }
    b = std::move(merged);
  }
  return buckets;
}

OdTable to_rates(OdTable counts, double interval_hours) {
  for (OdDemand& d : counts) d.demand /= interval_hours;
  return counts;
}

double assignment_cost(Objective obj, const Link& link, double flow, const CostModel& m) {
  switch (obj) {
    case Objective::UET: return bpr_time(free_flow_time(link), flow, link.capacity_vph, m.bpr);
    case Objective::SOT: return marginal_time_cost(link, flow, m.bpr);
    case Objective::SOF: return marginal_fuel_cost_clamped(link, flow, m.bpr, m.fuel, m.fuel_window);
  }
  return 0.0;
}

double objective_term(Objective obj, const Link& link, double flow, const CostModel& m) {
  switch (obj) {
    case Objective::UET: return bpr_integral(link, flow, m.bpr);
    case Objective::SOT: return flow * bpr_time(free_flow_time(link), flow, link.capacity_vph, m.bpr);
    case Objective::SOF: return fuel_rate(link, flow, m.bpr, m.fuel, m.fuel_window);
  }
  return 0.0;
}

AonResult all_or_nothing(const Network& net, const OdTable& od, std::span<const double> costs, unsigned workers) {
  if (costs.size() != net.link_count()) throw std::invalid_argument("cost vector size mismatch");
  for (double c : costs) {
    if (!std::isfinite(c) || !(c > 0.0)) throw std::invalid_argument("link costs must be positive and finite");
  }
  AonResult out;
  out.flow.assign(net.link_count(), 0.0);
  out.paths.resize(od.size());

  // Origin groups: [begin, end) ranges of the sorted table.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < od.size();) {
    std::size_t j = i;
    while (j < od.size() && od[j].origin == od[i].origin) ++j;
    groups.emplace_back(i, j);
    i = j;
  }

  parallel_for(groups.size(), workers, [&](std::size_t b, std::size_t e, unsigned) {
    ShortestPathTree tree(net.node_count());
    std::vector<NodeIndex> targets;
    for (std::size_t g = b; g < e; ++g) {
      const auto [first, last] = groups[g];
      targets.clear();
      for (std::size_t k = first; k < last; ++k) targets.push_back(od[k].destination);
      tree.run(net, od[first].origin, costs, targets);
      for (std::size_t k = first; k < last; ++k) {
        out.paths[k] = tree.path_to(net, od[k].origin, od[k].destination);
      }
    }
  });

  // Fixed reduction order keeps the sums independent of the worker count.
  for (std::size_t k = 0; k < od.size(); ++k) {
    if (out.paths[k].empty()) {
      out.unreachable.push_back(k);
      continue;
    }
    for (LinkIndex l : out.paths[k]) out.flow[l] += od[k].demand;
  }
  return out;
}

std::vector<LinkIndex> least_cost_path(const Network& net, NodeIndex origin, NodeIndex destination,
                                       std::span<const double> costs) {
  ShortestPathTree tree(net.node_count());
  const NodeIndex target[1] = {destination};
  tree.run(net, origin, costs, target);
  return tree.path_to(net, origin, destination);
}

FlowState make_flow_state(const Network& net, std::vector<double> flow, const BprParams& bpr) {
  FlowState s;
  s.flow = std::move(flow);
  s.time.resize(s.flow.size());
  s.speed.resize(s.flow.size());
  for (std::size_t i = 0; i < s.flow.size(); ++i) {
    const Link& l = net.link(static_cast<LinkIndex>(i));
    s.time[i] = bpr_time(free_flow_time(l), s.flow[i], l.capacity_vph, bpr);
    s.speed[i] = l.length_miles / s.time[i];
  }
  return s;
}

IntervalAssignment assign_interval(const Network& net, const OdTable& od, Objective obj, const SolverConfig& cfg,
                                   const CostModel& model_in, std::span<const double> warm_start) {
  cfg.validate();
  CostModel model = model_in;
  model.fuel_window.min_mph = cfg.speed_floor_mph;

  IntervalAssignment ia;
  const std::size_t L = net.link_count();
  auto path_costs = [&](std::span<const double> flow) {
    auto c = link_costs(net, flow, obj, model);
    for (double& x : c) x = std::max(x, kMinPathCost);
    return c;
  };

  const bool no_demand = std::all_of(od.begin(), od.end(), [](const OdDemand& d) { return d.demand == 0.0; });
  if (no_demand) {
    ia.state = make_flow_state(net, std::vector<double>(L, 0.0), model.bpr);
    ia.paths.resize(od.size());
    ia.gaps = {0.0};
    ia.objectives = {0.0};
    ia.iterations = 1;
    ia.converged = true;
    return ia;
  }

  AonResult aon = all_or_nothing(net, od, path_costs(warm_start.size() == L ? warm_start : std::span<const double>{}),
                                 cfg.workers);
  std::vector<double> flow = std::move(aon.flow);
  ia.unreachable = aon.unreachable;
  ia.paths.resize(od.size());
  for (std::size_t k = 0; k < od.size(); ++k) {
    if (!aon.paths[k].empty()) ia.paths[k].push_back({std::move(aon.paths[k]), 1.0});
  }

  double best_lower_bound = -std::numeric_limits<double>::infinity();
  std::vector<double> dir(L);
  std::vector<LinkIndex> active;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    const std::vector<double> cost = link_costs(net, flow, obj, model);
    std::vector<double> clamped = cost;
    for (double& x : clamped) x = std::max(x, kMinPathCost);
    AonResult y = all_or_nothing(net, od, clamped, cfg.workers);

    const double z = total_objective(net, flow, obj, model);
    double gap = 0.0;
    if (obj == Objective::UET) {
      double slope = 0.0;
      for (std::size_t a = 0; a < L; ++a) slope += cost[a] * (y.flow[a] - flow[a]);
      best_lower_bound = std::max(best_lower_bound, z + slope);
      gap = z != 0.0 ? (z - best_lower_bound) / std::abs(z) : 0.0;
    } else {
      double num = 0.0, den = 0.0;
      for (std::size_t a = 0; a < L; ++a) {
        num += (flow[a] - y.flow[a]) * cost[a];
        den += flow[a] * cost[a];
      }
      gap = den != 0.0 ? num / den : 0.0;
    }
    ia.gaps.push_back(gap);
    ia.objectives.push_back(z);
    ia.iterations = it;
    ia.final_gap = gap;
    if (gap <= cfg.gap_tolerance) {
      ia.converged = true;
      break;
    }
    if (it == cfg.max_iterations) break;

    active.clear();
    for (std::size_t a = 0; a < L; ++a) {
      dir[a] = y.flow[a] - flow[a];
      if (dir[a] != 0.0) active.push_back(static_cast<LinkIndex>(a));
    }
    // dZ/dsigma along the segment; nondecreasing for convex objectives.
    auto slope_at = [&](double sigma) {
      double g = 0.0;
      for (LinkIndex a : active) {
        const double f = std::max(0.0, flow[a] + sigma * dir[a]);
        g += dir[a] * assignment_cost(obj, net.link(a), f, model);
      }
      return g;
    };
    double sigma = 1.0;
    if (slope_at(1.0) > 0.0) {
      double lo = 0.0, hi = 1.0;
      for (int k = 0; k < cfg.line_search_max_iterations && hi - lo > cfg.line_search_tolerance; ++k) {
        const double mid = 0.5 * (lo + hi);
        (slope_at(mid) <= 0.0 ? lo : hi) = mid;
      }
      // The objective is still decreasing at lo, so stepping there never
      // raises it.
      sigma = lo;
    }
    if (sigma <= 0.0) continue;

    for (LinkIndex a : active) flow[a] = std::max(0.0, flow[a] + sigma * dir[a]);
    for (std::size_t k = 0; k < od.size(); ++k) {
      auto& paths = ia.paths[k];
      if (paths.empty()) continue;
      for (PathShare& p : paths) p.share *= (1.0 - sigma);
      auto hit = std::find_if(paths.begin(), paths.end(), [&](const PathShare& p) { return p.links == y.paths[k]; });
      if (hit != paths.end()) hit->share += sigma;
      else paths.push_back({std::move(y.paths[k]), sigma});
      std::erase_if(paths, [](const PathShare& p) { return p.share == 0.0; });
    }
  }

  ia.state = make_flow_state(net, std::move(flow), model.bpr);
  return ia;
}

OdTable active_demand(std::span<const ActiveTrip> active, double interval_end_s) {
  OdTable counts;
  for (const ActiveTrip& t : active) {
    if (t.clock_s < interval_end_s) counts.push_back({t.current, t.destination, 1.0});
  }
  std::sort(counts.begin(), counts.end(), od_less);
  OdTable merged;
  for (const OdDemand& d : counts) {
    if (!merged.empty() && merged.back().origin == d.origin && merged.back().destination == d.destination) {
      merged.back().demand += 1.0;
    } else {
      merged.push_back(d);
    }
  }
  return merged;
}

namespace {

// Largest-remainder split of `n` trips over path shares.
std::vector<std::size_t> split_trips(std::size_t n, const std::vector<PathShare>& paths) {
  std::vector<std::size_t> counts(paths.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t given = 0;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const double quota = static_cast<double>(n) * paths[p].share;
    counts[p] = static_cast<std::size_t>(std::floor(quota));
    given += counts[p];
    remainders.emplace_back(quota - std::floor(quota), p);
  }
  while (given > n) {  // only reachable through rounding of shares summing above one
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --given;
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; given < n; i = (i + 1) % remainders.size()) {
    ++counts[remainders[i].second];
    ++given;
  }
  return counts;
}

TripRecord finish(const Network& net, ActiveTrip& t, TripStatus status) {
  TripRecord r;
  r.trip_id = t.trip_id;
  r.links.reserve(t.traversed.size());
  for (LinkIndex l : t.traversed) r.links.push_back(net.link(l).id);
  r.start_s = t.depart_s;
  r.end_s = t.clock_s;
  r.distance_miles = t.distance_miles;
  r.travel_time_h = t.time_h;
  r.free_flow_time_h = t.free_flow_h;
  r.delay_h = t.time_h - t.free_flow_h;
  r.fuel_liters = t.fuel_liters;
  r.status = status;
  return r;
}

}  // namespace

AdvanceOutcome advance_trips(const Network& net, const IntervalAssignment& ia, const OdTable& od,
                             std::vector<ActiveTrip> active, double interval_start_s, double interval_s,
                             const CostModel& model) {
  AdvanceOutcome out;
  out.link_entries.assign(net.link_count(), 0.0);
  const double end = interval_start_s + interval_s;
  const FlowState& st = ia.state;

  std::vector<std::vector<std::size_t>> groups(od.size());
  for (std::size_t i = 0; i < active.size(); ++i) {
    const ActiveTrip& t = active[i];
    if (t.clock_s >= end) continue;
    const OdDemand key{t.current, t.destination, 0.0};
    auto it = std::lower_bound(od.begin(), od.end(), key, od_less);
    if (it == od.end() || it->origin != t.current || it->destination != t.destination) {
      throw std::logic_error("active trip " + std::to_string(t.trip_id) + " has no OD entry");
    }
    groups[static_cast<std::size_t>(it - od.begin())].push_back(i);
  }

  std::vector<char> done(active.size(), 0);
  for (std::size_t k = 0; k < od.size(); ++k) {
    auto& members = groups[k];
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return active[a].trip_id < active[b].trip_id; });
    const auto& paths = ia.paths[k];
    if (paths.empty()) {
      for (std::size_t i : members) {
        out.finished.push_back(finish(net, active[i], TripStatus::Failed));
        done[i] = 1;
      }
      continue;
    }
    const std::vector<std::size_t> counts = split_trips(members.size(), paths);
    std::size_t m = 0;
    for (std::size_t p = 0; p < paths.size(); ++p) {
      for (std::size_t c = 0; c < counts[p]; ++c, ++m) {
        ActiveTrip& t = active[members[m]];
        t.planned = paths[p].links;
        std::size_t i = 0;
        for (; i < t.planned.size(); ++i) {
          const LinkIndex l = t.planned[i];
          const double dt_s = st.time[l] * 3600.0;
          if (i > 0 && t.clock_s + dt_s > end) break;
          const Link& link = net.link(l);
          t.clock_s += dt_s;
          t.time_h += st.time[l];
          t.free_flow_h += free_flow_time(link);
          t.distance_miles += link.length_miles;
          t.fuel_liters += clamped_link_fuel(link, st.speed[l], model.fuel, model.fuel_window);
          t.traversed.push_back(l);
          t.current = net.head(l);
          out.link_entries[l] += 1.0;
        }
        t.planned.erase(t.planned.begin(), t.planned.begin() + static_cast<std::ptrdiff_t>(i));
        if (t.current == t.destination) {
          out.finished.push_back(finish(net, t, TripStatus::Completed));
          done[members[m]] = 1;
        }
      }
    }
  }
  for (std::size_t i = 0; i < active.size(); ++i) {
    if (!done[i]) out.residual.push_back(std::move(active[i]));
  }
  std::sort(out.residual.begin(), out.residual.end(),
            [](const ActiveTrip& a, const ActiveTrip& b) { return a.trip_id < b.trip_id; });
  return out;
}

bool AssignmentResult::all_converged() const {
  return std::all_of(convergence.begin(), convergence.end(), [](const IntervalLog& l) { return l.converged; });
}

AssignmentResult run_day(const Network& net, std::span<const TripRequest> trips, Objective obj,
                         const SolverConfig& cfg, const CostModel& model_in) {
  cfg.validate();
  model_in.bpr.validate();
  model_in.fuel.validate();
  CostModel model = model_in;
  model.fuel_window.min_mph = cfg.speed_floor_mph;

  const std::size_t n = cfg.interval_count();
  const double hours = cfg.interval_hours();
  const std::size_t L = net.link_count();

  std::vector<std::vector<const TripRequest*>> departures(n);
  for (const TripRequest& t : trips) {
    if (!(t.depart_s >= 0.0 && t.depart_s < kSecondsPerDay)) {
      throw std::invalid_argument("trip " + std::to_string(t.id) + " departs outside [0, 86400)");
    }
    departures[std::min(n - 1, static_cast<std::size_t>(std::floor(t.depart_s / cfg.interval_s)))].push_back(&t);
  }

  AssignmentResult result;
  result.objective = obj;
  result.interval_s = cfg.interval_s;
  result.intervals.reserve(n);
  std::vector<ActiveTrip> active;
  std::vector<double> previous_flow;

  for (std::size_t k = 0; k < n; ++k) {
    const double start = static_cast<double>(k) * cfg.interval_s;
    for (const TripRequest* t : departures[k]) {
      ActiveTrip a;
      a.trip_id = t->id;
      a.current = net.node_index(t->origin);
      a.destination = net.node_index(t->destination);
      a.depart_s = t->depart_s;
      a.clock_s = t->depart_s;
      active.push_back(std::move(a));
    }

    const OdTable counts = active_demand(active, start + cfg.interval_s);
    const OdTable rates = to_rates(counts, hours);
    IntervalAssignment ia = assign_interval(net, rates, obj, cfg, model, previous_flow);

    IntervalLog log;
    log.interval = k;
    log.od_pairs = rates.size();
    log.unreachable = ia.unreachable.size();
    log.iterations = ia.iterations;
    log.converged = ia.converged;
    log.final_gap = ia.final_gap;
    log.gaps = ia.gaps;
    if (!ia.converged) {
      result.warnings.push_back("interval " + std::to_string(k) + ": not converged after " +
                                std::to_string(ia.iterations) + " iterations, gap " + format_double(ia.final_gap));
    }
    result.convergence.push_back(std::move(log));

    AdvanceOutcome moved = advance_trips(net, ia, rates, std::move(active), start, cfg.interval_s, model);
    for (TripRecord& r : moved.finished) result.trips.push_back(std::move(r));
    active = std::move(moved.residual);

    std::vector<double> loaded(L);
    for (std::size_t a = 0; a < L; ++a) loaded[a] = moved.link_entries[a] / hours;
    result.intervals.push_back(make_flow_state(net, std::move(loaded), model.bpr));
    previous_flow = ia.state.flow;
    result.assigned_flow.push_back(std::move(ia.state.flow));
  }

  // Trips still travelling at the end of the day finish at free flow.
  if (!active.empty()) {
    std::vector<double> free_costs(L);
    for (std::size_t a = 0; a < L; ++a) free_costs[a] = free_flow_time(net.link(static_cast<LinkIndex>(a)));
    std::vector<double> extra(L, 0.0);
    for (ActiveTrip& t : active) {
      if (t.planned.empty() && t.current != t.destination) {
        t.planned = least_cost_path(net, t.current, t.destination, free_costs);
      }
      if (t.current != t.destination && t.planned.empty()) {
        result.trips.push_back(finish(net, t, TripStatus::Failed));
        continue;
      }
      for (LinkIndex l : t.planned) {
        const Link& link = net.link(l);
        const double c0 = free_flow_time(link);
        t.clock_s += c0 * 3600.0;
        t.time_h += c0;
        t.free_flow_h += c0;
        t.distance_miles += link.length_miles;
        t.fuel_liters += clamped_link_fuel(link, link.speed_mph, model.fuel, model.fuel_window);
        t.traversed.push_back(l);
        t.current = net.head(l);
        extra[l] += 1.0;
      }
      t.planned.clear();
      result.trips.push_back(finish(net, t, TripStatus::ForceCompleted));
    }
    std::vector<double> last = result.intervals.back().flow;
    for (std::size_t a = 0; a < L; ++a) last[a] += extra[a] / hours;
    result.intervals.back() = make_flow_state(net, std::move(last), model.bpr);
    result.warnings.push_back(std::to_string(active.size()) + " trips force-completed at end of day");
  }

  std::sort(result.trips.begin(), result.trips.end(),
            [](const TripRecord& a, const TripRecord& b) { return a.trip_id < b.trip_id; });
  return result;
}

void write_flows(const Network& net, const AssignmentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "interval,link_id,flow_vph,time_h,speed_mph\n";
  for (std::size_t k = 0; k < result.intervals.size(); ++k) {
    const FlowState& s = result.intervals[k];
    for (std::size_t a = 0; a < s.flow.size(); ++a) {
      if (s.flow[a] == 0.0) continue;
      out << k << ',' << net.link(static_cast<LinkIndex>(a)).id << ',' << format_double(s.flow[a]) << ','
          << format_double(s.time[a]) << ',' << format_double(s.speed[a]) << '\n';
    }
  }
}

void write_trips(const AssignmentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "trip_id,status,start_s,end_s,distance_miles,travel_time_h,free_flow_time_h,delay_h,fuel_liters,links\n";
  for (const TripRecord& r : result.trips) {
    std::string links;
    for (std::size_t i = 0; i < r.links.size(); ++i) {
      if (i) links += ' ';
      links += std::to_string(r.links[i]);
    }
    write_csv_row(out, {std::to_string(r.trip_id), std::string(to_string(r.status)), format_double(r.start_s),
                        format_double(r.end_s), format_double(r.distance_miles), format_double(r.travel_time_h),
                        format_double(r.free_flow_time_h), format_double(r.delay_h), format_double(r.fuel_liters),
                        links});
  }
}

void write_convergence(const AssignmentResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "interval,od_pairs,unreachable,iterations,converged,final_gap\n";
  for (const IntervalLog& l : result.convergence) {
    out << l.interval << ',' << l.od_pairs << ',' << l.unreachable << ',' << l.iterations << ','
        << (l.converged ? 1 : 0) << ',' << format_double(l.final_gap) << '\n';
  }
}

AssignmentResult read_assignment(const Network& net, Objective obj, const SolverConfig& cfg,
                                 const std::filesystem::path& flows_csv, const std::filesystem::path& trips_csv) {
  cfg.validate();
  AssignmentResult r;
  r.objective = obj;
  r.interval_s = cfg.interval_s;
  const std::size_t n = cfg.interval_count();
  const std::size_t L = net.link_count();
  r.intervals.resize(n);
  for (FlowState& s : r.intervals) {
    s.flow.assign(L, 0.0);
    s.time.resize(L);
    s.speed.resize(L);
    for (std::size_t a = 0; a < L; ++a) {
      const Link& l = net.link(static_cast<LinkIndex>(a));
      s.time[a] = bpr_time(free_flow_time(l), 0.0, l.capacity_vph);
      s.speed[a] = l.length_miles / s.time[a];
    }
  }

  const CsvTable ft = read_csv(flows_csv);
  const std::size_t c_k = ft.column("interval"), c_l = ft.column("link_id"), c_f = ft.column("flow_vph"),
                    c_t = ft.column("time_h"), c_s = ft.column("speed_mph");
  for (const auto& row : ft.rows) {
    const auto k = field_int(ft, row, c_k);
    if (k < 0 || static_cast<std::size_t>(k) >= n) {
      throw LoadError(ft.source + ": interval out of range, row " + std::to_string(row.line));
    }
    const auto link = net.find_link(field_int(ft, row, c_l));
    if (!link) throw LoadError(ft.source + ": unknown link_id, row " + std::to_string(row.line));
    FlowState& s = r.intervals[static_cast<std::size_t>(k)];
    s.flow[*link] = field_double(ft, row, c_f);
    s.time[*link] = field_double(ft, row, c_t);
    s.speed[*link] = field_double(ft, row, c_s);
  }

  const CsvTable tt = read_csv(trips_csv);
  const std::size_t c_id = tt.column("trip_id"), c_st = tt.column("status"), c_s0 = tt.column("start_s"),
                    c_s1 = tt.column("end_s"), c_d = tt.column("distance_miles"), c_tt = tt.column("travel_time_h"),
                    c_ff = tt.column("free_flow_time_h"), c_dl = tt.column("delay_h"),
                    c_fu = tt.column("fuel_liters"), c_ln = tt.column("links");
  for (const auto& row : tt.rows) {
    TripRecord rec;
    rec.trip_id = field_int(tt, row, c_id);
    try {
      rec.status = parse_trip_status(row.fields[c_st]);
    } catch (const std::invalid_argument& e) {
      throw LoadError(tt.source + ": " + e.what() + ", row " + std::to_string(row.line));
    }
    rec.start_s = field_double(tt, row, c_s0);
    rec.end_s = field_double(tt, row, c_s1);
    rec.distance_miles = field_double(tt, row, c_d);
    rec.travel_time_h = field_double(tt, row, c_tt);
    rec.free_flow_time_h = field_double(tt, row, c_ff);
    rec.delay_h = field_double(tt, row, c_dl);
    rec.fuel_liters = field_double(tt, row, c_fu);
    std::istringstream ls(row.fields[c_ln]);
    for (LinkId id; ls >> id;) rec.links.push_back(id);
    r.trips.push_back(std::move(rec));
  }
  return r;
}

}  // namespace saef
