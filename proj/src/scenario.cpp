#include "saef/scenario.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "saef/chart.hpp"
#include "saef/csv.hpp"
#include "saef/geo.hpp"
#include "saef/typology.hpp"

namespace saef {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys{
    "nodes",          "links",         "parcels",          "schools",
    "tracts",         "trips",         "objectives",       "output_dir",
    "interval_s",     "max_iterations", "gap_tolerance",   "line_search_tolerance",
    "line_search_max_iterations",      "speed_floor_mph",  "workers",
    "bpr_alpha",      "bpr_beta",      "fuel_a",           "fuel_b",
    "fuel_c",         "morning_start_h", "morning_end_h",  "adjacency_buffer_m",
    "school_radius_m"};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

template <typename T>
T get(const json& doc, const std::string& key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

json to_json(const Scenario& s) {
  json objs = json::array();
  for (Objective o : s.objectives) objs.push_back(std::string(file_suffix(o)));
  return json{{"nodes", s.nodes.string()},
              {"links", s.links.string()},
              {"parcels", s.parcels.string()},
              {"schools", s.schools.string()},
              {"tracts", s.tracts.string()},
              {"trips", s.trips.string()},
              {"objectives", objs},
              {"output_dir", s.output_dir.string()},
              {"interval_s", s.solver.interval_s},
              {"max_iterations", s.solver.max_iterations},
              {"gap_tolerance", s.solver.gap_tolerance},
              {"line_search_tolerance", s.solver.line_search_tolerance},
              {"line_search_max_iterations", s.solver.line_search_max_iterations},
              {"speed_floor_mph", s.solver.speed_floor_mph},
              {"workers", s.solver.workers},
              {"bpr_alpha", s.costs.bpr.alpha},
              {"bpr_beta", s.costs.bpr.beta},
              {"fuel_a", s.costs.fuel.a},
              {"fuel_b", s.costs.fuel.b},
              {"fuel_c", s.costs.fuel.c},
              {"morning_start_h", s.morning.start_s / 3600.0},
              {"morning_end_h", s.morning.end_s / 3600.0},
              {"adjacency_buffer_m", s.adjacency_buffer_m},
              {"school_radius_m", s.school_radius_m}};
}

struct CityInputs {
  Network net;
  std::vector<StreetType> types;
};

CityInputs load_city(const Scenario& s, std::ostream& log) {
  CityInputs c;
  c.net = load_network(s.nodes, s.links);
  for (const auto& w : c.net.validation().warnings) log << "warning: " << w << '\n';
  const ParcelSet parcels = load_parcels(s.parcels);
  c.types = classify_network(c.net, parcels, s.adjacency_buffer_m);
  return c;
}

fs::path out_file(const Scenario& s, const std::string& stem, Objective o, const char* ext) {
  return s.output_dir / (stem + "_" + std::string(file_suffix(o)) + ext);
}

void assign_one(const Scenario& s, const Network& net, const std::vector<TripRequest>& trips, Objective obj,
                std::ostream& log) {
  const AssignmentResult r = run_day(net, trips, obj, s.solver, s.costs);
  write_flows(net, r, out_file(s, "flows", obj, ".csv"));
  write_trips(r, out_file(s, "trips", obj, ".csv"));
  write_convergence(r, out_file(s, "convergence", obj, ".csv"));
  double worst = 0.0;
  std::size_t converged = 0;
  for (const IntervalLog& l : r.convergence) {
    worst = std::max(worst, l.final_gap);
    converged += l.converged ? 1 : 0;
  }
  log << to_string(obj) << ": " << converged << '/' << r.convergence.size()
      << " intervals converged, worst gap " << format_double(worst) << '\n';
  for (const auto& w : r.warnings) log << "warning: " << to_string(obj) << ": " << w << '\n';
}

void indicators_for(const Scenario& s, const CityInputs& city, std::ostream& log) {
  const std::vector<School> schools = load_schools(s.schools);
  const TractSet tracts = load_tracts(s.tracts);
  for (const auto& w : tracts.warnings) log << "warning: " << w << '\n';
  IndicatorInputs in{city.net, city.types, schools, tracts.tracts, s.morning, s.school_radius_m, {}};

  std::vector<IndicatorReport> reports;
  reports.reserve(s.objectives.size());
  for (Objective o : s.objectives) {
    const fs::path flows = out_file(s, "flows", o, ".csv"), trips = out_file(s, "trips", o, ".csv");
    for (const fs::path& p : {flows, trips}) {
      if (!fs::exists(p)) throw ConfigError("missing assignment output " + p.string() + " (run assign first)");
    }
    const AssignmentResult r = read_assignment(city.net, o, s.solver, flows, trips);
    reports.push_back(build_report(r, in));
    write_indicators(reports.back(), out_file(s, "indicators", o, ".csv"));
    write_school_exposure(city.net, reports.back(), out_file(s, "school_exposure", o, ".csv"));
    const TripStats& t = reports.back().trips;
    if (t.force_completed || t.failed) {
      log << "warning: " << to_string(o) << ": " << t.force_completed << " force-completed, " << t.failed
          << " failed trips\n";
    }
  }
  std::vector<std::pair<Objective, const IndicatorReport*>> cols;
  for (std::size_t i = 0; i < reports.size(); ++i) cols.emplace_back(s.objectives[i], &reports[i]);
  write_comparison(make_comparison(cols), s.output_dir / "comparison.csv");
  log << "indicators written for " << reports.size() << " objective(s)\n";
}

void ensure_output_dir(const Scenario& s) {
  std::error_code ec;
  fs::create_directories(s.output_dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + s.output_dir.string() + ": " + ec.message());
}

}  // namespace

void Scenario::validate() const {
  const std::pair<const char*, const fs::path*> files[] = {{"nodes", &nodes},     {"links", &links},
                                                           {"parcels", &parcels}, {"schools", &schools},
                                                           {"tracts", &tracts},   {"trips", &trips}};
  for (const auto& [key, p] : files) {
    if (p->empty()) throw ConfigError("config key '" + std::string(key) + "' is required");
    if (!fs::is_regular_file(*p)) throw ConfigError("input file not found: " + p->string());
  }
  if (objectives.empty()) throw ConfigError("at least one objective is required");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  try {
    solver.validate();
    costs.bpr.validate();
    costs.fuel.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(morning.start_s >= 0.0 && morning.end_s > morning.start_s && morning.end_s <= kSecondsPerDay)) {
    throw ConfigError("morning window must satisfy 0 <= start < end <= 24 h");
  }
  if (!(adjacency_buffer_m > 0.0)) throw ConfigError("adjacency_buffer_m must be positive");
  if (!(school_radius_m > 0.0)) throw ConfigError("school_radius_m must be positive");
}

Scenario parse_scenario(const std::string& text, const fs::path& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  Scenario s;
  for (auto [key, field] : {std::pair{"nodes", &s.nodes}, std::pair{"links", &s.links},
                            std::pair{"parcels", &s.parcels}, std::pair{"schools", &s.schools},
                            std::pair{"tracts", &s.tracts}, std::pair{"trips", &s.trips}}) {
    const std::string v = get<std::string>(doc, key, "");
    if (!v.empty()) *field = resolve(base, v);
  }
  s.output_dir = resolve(base, get<std::string>(doc, "output_dir", s.output_dir.string()));
  if (doc.contains("objectives")) {
    s.objectives.clear();
    for (const auto& name : get<std::vector<std::string>>(doc, "objectives", {})) {
      Objective o;
      try {
        o = parse_objective(name);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      if (std::find(s.objectives.begin(), s.objectives.end(), o) != s.objectives.end()) {
        throw ConfigError("objective '" + name + "' listed twice");
      }
      s.objectives.push_back(o);
    }
  }
  s.solver.interval_s = get(doc, "interval_s", s.solver.interval_s);
  s.solver.max_iterations = get(doc, "max_iterations", s.solver.max_iterations);
  s.solver.gap_tolerance = get(doc, "gap_tolerance", s.solver.gap_tolerance);
  s.solver.line_search_tolerance = get(doc, "line_search_tolerance", s.solver.line_search_tolerance);
  s.solver.line_search_max_iterations = get(doc, "line_search_max_iterations", s.solver.line_search_max_iterations);
  s.solver.speed_floor_mph = get(doc, "speed_floor_mph", s.solver.speed_floor_mph);
  const auto workers = get<long long>(doc, "workers", s.solver.workers);
  if (workers < 1 || workers > 1024) throw ConfigError("workers must be in [1, 1024]");
  s.solver.workers = static_cast<unsigned>(workers);
  s.costs.bpr.alpha = get(doc, "bpr_alpha", s.costs.bpr.alpha);
  s.costs.bpr.beta = get(doc, "bpr_beta", s.costs.bpr.beta);
  s.costs.fuel.a = get(doc, "fuel_a", s.costs.fuel.a);
  s.costs.fuel.b = get(doc, "fuel_b", s.costs.fuel.b);
  s.costs.fuel.c = get(doc, "fuel_c", s.costs.fuel.c);
  s.morning.start_s = 3600.0 * get(doc, "morning_start_h", s.morning.start_s / 3600.0);
  s.morning.end_s = 3600.0 * get(doc, "morning_end_h", s.morning.end_s / 3600.0);
  s.adjacency_buffer_m = get(doc, "adjacency_buffer_m", s.adjacency_buffer_m);
  s.school_radius_m = get(doc, "school_radius_m", s.school_radius_m);
  return s;
}

Scenario load_scenario(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  Scenario s = parse_scenario(text.str(), path.parent_path());
  s.validate();
  return s;
}

std::string default_config_json() { return to_json(Scenario{}).dump(2) + "\n"; }

void run_classify(const Scenario& s, std::ostream& log) {
  ensure_output_dir(s);
  const CityInputs city = load_city(s, log);
  write_link_types(city.net, city.types, s.output_dir / "link_types.csv");
  log << "classified " << city.types.size() << " links\n";
}

void run_assign(const Scenario& s, Objective obj, std::ostream& log) {
  ensure_output_dir(s);
  const Network net = load_network(s.nodes, s.links);
  const std::vector<TripRequest> trips = load_trips(s.trips, net);
  assign_one(s, net, trips, obj, log);
}

void run_indicators(const Scenario& s, std::ostream& log) {
  ensure_output_dir(s);
  indicators_for(s, load_city(s, log), log);
}

void run_pipeline(const Scenario& s, std::ostream& log) {
  ensure_output_dir(s);
  const CityInputs city = load_city(s, log);
  write_link_types(city.net, city.types, s.output_dir / "link_types.csv");
  const std::vector<TripRequest> trips = load_trips(s.trips, city.net);
  log << "loaded " << city.net.link_count() << " links, " << trips.size() << " trips\n";
  for (Objective o : s.objectives) assign_one(s, city.net, trips, o, log);
  indicators_for(s, city, log);
  emit_chart(read_comparison(s.output_dir / "comparison.csv"), s.output_dir / "chart.svg");
}

}  // namespace saef
