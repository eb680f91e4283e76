#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "saef/geo.hpp"
#include "saef/network.hpp"
#include "saef/qdta.hpp"
#include "saef/typology.hpp"

namespace fixtures {

// Straight link between two nodes; geometry length matches length_miles.
saef::Link straight_link(saef::LinkId id, const saef::Node& a, const saef::Node& b, double speed_mph,
                         double capacity_vph, int fclass = 5, int lanes = 1);

// Two parallel links from node 1 to node 2:
//   link 1: free-flow time 1 h, capacity 1e6 (practically uncongestible)
//   link 2: free-flow time 0.5 h, capacity 1000
saef::Network pigou();
inline constexpr double kPigouDemand = 3000.0;  // veh/h

// Nodes 1..n along the x axis, `spacing_m` apart, links i -> i+1.
saef::Network line(int nodes, double spacing_m = 1609.344, double speed_mph = 30.0, double capacity_vph = 1000.0);

struct Grid {
  int size = 0;             // nodes per side
  double spacing_m = 0.0;
  int highway_row = 0;      // row index holding the fast corridor
  saef::Network net;
  std::vector<saef::Parcel> parcels;
  std::vector<saef::School> schools;
  std::vector<saef::Tract> tracts;
  std::vector<saef::NodeId> zones;  // trip ends

  saef::NodeId node_id(int row, int col) const { return static_cast<saef::NodeId>(row) * size + col + 1; }
};

// Bidirectional lattice: horizontal links on `highway_row` are fclass 1,
// 65 mph, 3 lanes; everything else fclass 5, 30 mph, 1 lane. One parcel per
// block, inset 15 m, mostly residential. Tracts are the four quadrants; the
// south-west one is a community of concern.
Grid grid(int size, double spacing_m = 200.0);

// Trips between random zone pairs, departure times drawn from a two-peak
// daily profile. Deterministic in `seed`.
std::vector<saef::TripRequest> grid_trips(const Grid& g, std::size_t count, std::uint32_t seed);

// Files for a full CLI run, plus config.json. Returns the config path.
std::filesystem::path write_scenario(const std::filesystem::path& dir, const Grid& g,
                                     const std::vector<saef::TripRequest>& trips,
                                     const std::string& extra_json = "");

void write_parcels(const std::filesystem::path& path, const std::vector<saef::Parcel>& parcels);
void write_schools(const std::filesystem::path& path, const std::vector<saef::School>& schools);
void write_tracts(const std::filesystem::path& path, const std::vector<saef::Tract>& tracts);
void write_trips(const std::filesystem::path& path, const std::vector<saef::TripRequest>& trips);

// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

std::string read_file(const std::filesystem::path& path);

}  // namespace fixtures
