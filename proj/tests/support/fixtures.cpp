#include "fixtures.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "saef/csv.hpp"

namespace fixtures {

using saef::Link;
using saef::Node;
using saef::Point;

Link straight_link(saef::LinkId id, const Node& a, const Node& b, double speed_mph, double capacity_vph, int fclass,
                   int lanes) {
  Link l;
  l.id = id;
  l.from = a.id;
  l.to = b.id;
  l.geometry = {{a.x, a.y}, {b.x, b.y}};
  l.length_miles = saef::polyline_length(l.geometry) / saef::kMetersPerMile;
  l.speed_mph = speed_mph;
  l.capacity_vph = capacity_vph;
  l.fclass = fclass;
  l.lanes = lanes;
  return l;
}

saef::Network pigou() {
  // Link 2 is straight and 15 mi long (0.5 h at 30 mph); link 1 bows out to
  // 60 mi (1 h at 60 mph).
  const double span = 15.0 * saef::kMetersPerMile;
  std::vector<Node> nodes{{1, 0.0, 0.0}, {2, span, 0.0}};
  const double half = 30.0 * saef::kMetersPerMile;
  const double rise = std::sqrt(half * half - (span / 2) * (span / 2));
  Link a;
  a.id = 1;
  a.from = 1;
  a.to = 2;
  a.geometry = {{0.0, 0.0}, {span / 2, rise}, {span, 0.0}};
  a.length_miles = 60.0;
  a.speed_mph = 60.0;
  a.capacity_vph = 1e6;
  a.fclass = 3;
  a.lanes = 2;
  Link b = straight_link(2, nodes[0], nodes[1], 30.0, 1000.0, 3, 2);
  b.length_miles = 15.0;
  return saef::Network(nodes, {a, b});
}

saef::Network line(int n, double spacing_m, double speed_mph, double capacity_vph) {
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i + 1, i * spacing_m, 0.0});
  std::vector<Link> links;
  for (int i = 0; i + 1 < n; ++i) links.push_back(straight_link(i + 1, nodes[i], nodes[i + 1], speed_mph, capacity_vph));
  return saef::Network(nodes, links);
}

Grid grid(int size, double spacing_m) {
  Grid g;
  g.size = size;
  g.spacing_m = spacing_m;
  g.highway_row = size / 2;

  std::vector<Node> nodes;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) nodes.push_back({g.node_id(r, c), c * spacing_m, r * spacing_m});
  }
  const auto node = [&](int r, int c) -> const Node& { return nodes[static_cast<std::size_t>(r * size + c)]; };

  std::vector<Link> links;
  saef::LinkId next = 1;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      if (c + 1 < size) {
        const bool hw = r == g.highway_row;
        for (auto [a, b] : {std::pair{&node(r, c), &node(r, c + 1)}, std::pair{&node(r, c + 1), &node(r, c)}}) {
          links.push_back(hw ? straight_link(next++, *a, *b, 65.0, 6000.0, 1, 3)
                             : straight_link(next++, *a, *b, 30.0, 800.0, 5, 1));
        }
      }
      if (r + 1 < size) {
        for (auto [a, b] : {std::pair{&node(r, c), &node(r + 1, c)}, std::pair{&node(r + 1, c), &node(r, c)}}) {
          links.push_back(straight_link(next++, *a, *b, 30.0, 800.0, 5, 1));
        }
      }
    }
  }
  g.net = saef::Network(nodes, links);

  constexpr double inset = 15.0;
  std::int64_t pid = 1;
  for (int r = 0; r + 1 < size; ++r) {
    for (int c = 0; c + 1 < size; ++c) {
      const double x0 = c * spacing_m + inset, y0 = r * spacing_m + inset;
      const double x1 = (c + 1) * spacing_m - inset, y1 = (r + 1) * spacing_m - inset;
      saef::Parcel p;
      p.id = pid++;
      p.ring = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
      p.area_m2 = saef::ring_area(p.ring);
      p.land_use = (r * 31 + c * 17) % 11 == 0 ? saef::LandUse::Commercial : saef::LandUse::Residential;
      g.parcels.push_back(std::move(p));
    }
  }

  const double hw_y = g.highway_row * spacing_m;
  g.schools = {{"S1", {3.5 * spacing_m, hw_y + 120.0}, 80.0},
               {"S2", {(size - 4.5) * spacing_m, hw_y - 150.0}, 40.0},
               {"S3", {2.5 * spacing_m, 2.5 * spacing_m}, 90.0},
               {"S4", {(size - 3.5) * spacing_m, (size - 3.5) * spacing_m}, 20.0},
               {"S5", {(size / 2 + 0.5) * spacing_m, 4.5 * spacing_m}, 76.0}};

  const double lo = -spacing_m / 2, hi = (size - 1) * spacing_m + spacing_m / 2;
  const double split = (size / 2) * spacing_m - 50.0;
  const auto quad = [](double x0, double y0, double x1, double y1) {
    return saef::Ring{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  };
  g.tracts = {{"SW", quad(lo, lo, split, split), 3200.0, true},
              {"SE", quad(split, lo, hi, split), 2000.0, false},
              {"NW", quad(lo, split, split, hi), 2400.0, false},
              {"NE", quad(split, split, hi, hi), 2400.0, false}};

  // Every fifth node each way; small grids use every other node.
  const int step = size < 10 ? 2 : 5, first = size < 10 ? 1 : 2;
  for (int r = first; r < size; r += step) {
    for (int c = first; c < size; c += step) g.zones.push_back(g.node_id(r, c));
  }
  return g;
}

std::vector<saef::TripRequest> grid_trips(const Grid& g, std::size_t count, std::uint32_t seed) {
  static constexpr std::array<double, 24> hourly{1, 1, 1, 1, 2, 4, 8, 12, 10, 6, 5, 5,
                                                 5, 5, 6, 8, 11, 12, 9, 6, 4, 3, 2, 1};
  if (g.zones.size() < 2) throw std::invalid_argument("grid has fewer than two zones");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> hour(hourly.begin(), hourly.end());
  std::uniform_real_distribution<double> within(0.0, 3600.0);
  std::uniform_int_distribution<std::size_t> zone(0, g.zones.size() - 1);
  std::vector<saef::TripRequest> trips;
  trips.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t o = zone(rng), d = zone(rng);
    while (d == o) d = zone(rng);
    const double depart = std::min(hour(rng) * 3600.0 + within(rng), 86399.0);
    trips.push_back({static_cast<std::int64_t>(i + 1), g.zones[o], g.zones[d], depart});
  }
  return trips;
}

namespace {

std::string ring_json(const saef::Ring& ring) {
  std::string s = "[[";
  for (std::size_t i = 0; i <= ring.size(); ++i) {
    const Point& p = ring[i % ring.size()];
    if (i) s += ',';
    s += '[' + saef::format_double(p.x) + ',' + saef::format_double(p.y) + ']';
  }
  return s + "]]";
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_parcels(const std::filesystem::path& path, const std::vector<saef::Parcel>& parcels) {
  auto out = open_out(path);
  out << "{\"type\":\"FeatureCollection\",\"features\":[\n";
  for (std::size_t i = 0; i < parcels.size(); ++i) {
    const auto& p = parcels[i];
    out << (i ? ",\n" : "") << "{\"type\":\"Feature\",\"properties\":{\"parcel_id\":" << p.id
        << ",\"land_use\":\"" << saef::to_string(p.land_use) << "\"},\"geometry\":{\"type\":\"Polygon\","
        << "\"coordinates\":" << ring_json(p.ring) << "}}";
  }
  out << "\n]}\n";
}

void write_schools(const std::filesystem::path& path, const std::vector<saef::School>& schools) {
  auto out = open_out(path);
  out << "school_id,x,y,pct_minority\n";
  for (const auto& s : schools) {
    out << s.id << ',' << saef::format_double(s.location.x) << ',' << saef::format_double(s.location.y) << ','
        << saef::format_double(s.pct_minority) << '\n';
  }
}

void write_tracts(const std::filesystem::path& path, const std::vector<saef::Tract>& tracts) {
  auto out = open_out(path);
  out << "{\"type\":\"FeatureCollection\",\"features\":[\n";
  for (std::size_t i = 0; i < tracts.size(); ++i) {
    const auto& t = tracts[i];
    out << (i ? ",\n" : "") << "{\"type\":\"Feature\",\"properties\":{\"tract_id\":\"" << t.id
        << "\",\"population\":" << saef::format_double(t.population) << ",\"is_coc\":" << (t.is_coc ? "true" : "false")
        << "},\"geometry\":{\"type\":\"Polygon\",\"coordinates\":" << ring_json(t.ring) << "}}";
  }
  out << "\n]}\n";
}

void write_trips(const std::filesystem::path& path, const std::vector<saef::TripRequest>& trips) {
  auto out = open_out(path);
  out << "trip_id,origin,destination,depart_s\n";
  for (const auto& t : trips) {
    out << t.id << ',' << t.origin << ',' << t.destination << ',' << saef::format_double(t.depart_s) << '\n';
  }
}

std::filesystem::path write_scenario(const std::filesystem::path& dir, const Grid& g,
                                     const std::vector<saef::TripRequest>& trips, const std::string& extra_json) {
  std::filesystem::create_directories(dir);
  saef::save_network(g.net, dir / "nodes.csv", dir / "links.csv");
  write_parcels(dir / "parcels.geojson", g.parcels);
  write_schools(dir / "schools.csv", g.schools);
  write_tracts(dir / "tracts.geojson", g.tracts);
  write_trips(dir / "trips.csv", trips);
  const auto cfg = dir / "config.json";
  auto out = open_out(cfg);
  out << "{\n  \"nodes\": \"nodes.csv\",\n  \"links\": \"links.csv\",\n  \"parcels\": \"parcels.geojson\",\n"
      << "  \"schools\": \"schools.csv\",\n  \"tracts\": \"tracts.geojson\",\n  \"trips\": \"trips.csv\",\n"
      << "  \"output_dir\": \"out\"" << (extra_json.empty() ? "" : ",\n  " + extra_json) << "\n}\n";
  return cfg;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("saef_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace fixtures
