#include "saef/geo.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "geojson.hpp"
#include "saef/csv.hpp"

namespace saef {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BgPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using BgBox = bg::model::box<BgPoint>;
using Entry = std::pair<BgBox, std::size_t>;

BgBox to_bg(const Box& b) { return BgBox(BgPoint(b.min_x, b.min_y), BgPoint(b.max_x, b.max_y)); }

Box inflate(const Box& b, double r) { return {b.min_x - r, b.min_y - r, b.max_x + r, b.max_y + r}; }

}  // namespace

struct SpatialIndex::Tree {
  bgi::rtree<Entry, bgi::rstar<16>> rtree;
};

SpatialIndex::SpatialIndex() : tree_(std::make_unique<Tree>()) {}

SpatialIndex::SpatialIndex(const std::vector<Box>& boxes) : tree_(std::make_unique<Tree>()) {
  std::vector<Entry> entries;
  entries.reserve(boxes.size());
  for (std::size_t i = 0; i < boxes.size(); ++i) entries.emplace_back(to_bg(boxes[i]), i);
  tree_->rtree = bgi::rtree<Entry, bgi::rstar<16>>(entries);  // bulk load
}

SpatialIndex::SpatialIndex(SpatialIndex&&) noexcept = default;
SpatialIndex& SpatialIndex::operator=(SpatialIndex&&) noexcept = default;
SpatialIndex::~SpatialIndex() = default;

std::vector<std::size_t> SpatialIndex::query(const Box& window) const {
  std::vector<Entry> hits;
  tree_->rtree.query(bgi::intersects(to_bg(window)), std::back_inserter(hits));
  std::vector<std::size_t> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(h.second);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t SpatialIndex::size() const { return tree_->rtree.size(); }

SpatialIndex SpatialIndex::over_links(const Network& net) {
  std::vector<Box> boxes;
  boxes.reserve(net.link_count());
  for (const Link& l : net.links()) boxes.push_back(bounding_box(l.geometry));
  return SpatialIndex(boxes);
}

SpatialIndex SpatialIndex::over_rings(const std::vector<Ring>& rings) {
  std::vector<Box> boxes;
  boxes.reserve(rings.size());
  for (const Ring& r : rings) boxes.push_back(bounding_box(r));
  return SpatialIndex(boxes);
}

std::vector<LinkIndex> links_within_radius(Point p, double radius_m, const Network& net,
                                           const SpatialIndex& link_index) {
  if (!(radius_m > 0.0)) throw std::invalid_argument("radius must be positive");
  std::vector<LinkIndex> out;
  for (std::size_t i : link_index.query(inflate(Box{p.x, p.y, p.x, p.y}, radius_m))) {
    if (point_polyline_distance(p, net.link(static_cast<LinkIndex>(i)).geometry) <= radius_m) {
      out.push_back(static_cast<LinkIndex>(i));
    }
  }
  return out;
}

std::optional<std::size_t> link_tract(const Link& link, const std::vector<Tract>& tracts,
                                      const SpatialIndex& tract_index) {
  const Point mid = point_along(link.geometry, 0.5);
  for (std::size_t i : tract_index.query(Box{mid.x, mid.y, mid.x, mid.y})) {
    if (point_in_polygon(mid, tracts[i].ring)) return i;
  }
  return std::nullopt;
}

std::vector<School> load_schools(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_id = t.column("school_id"), c_x = t.column("x"), c_y = t.column("y"),
                    c_pct = t.column("pct_minority");
  std::vector<School> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    School s{row.fields[c_id], {field_double(t, row, c_x), field_double(t, row, c_y)},
             field_double(t, row, c_pct)};
    if (s.pct_minority < 0.0 || s.pct_minority > 100.0) {
      throw LoadError(t.source + ": pct_minority outside [0, 100], row " + std::to_string(row.line));
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string id_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return format_double(v.get<double>());
  throw LoadError("identifier must be a string or number");
}

}  // namespace

Ring read_geojson_outer_ring(const nlohmann::json& geometry, const std::string& where) {
  if (!geometry.is_object() || geometry.value("type", "") != "Polygon") {
    throw LoadError(where + ": geometry must be a Polygon");
  }
  const auto& rings = geometry.at("coordinates");
  if (!rings.is_array() || rings.empty()) throw LoadError(where + ": polygon has no rings");
  Ring ring;
  for (const auto& c : rings.at(0)) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
      throw LoadError(where + ": bad coordinate");
    }
    ring.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  if (ring.size() < 3) throw LoadError(where + ": ring needs at least 3 distinct vertices");
  return ring;
}

nlohmann::json read_feature_collection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  if (doc.value("type", "") != "FeatureCollection" || !doc.contains("features")) {
    throw LoadError(path.string() + ": expected a GeoJSON FeatureCollection");
  }
  return doc;
}

TractSet load_tracts(const std::filesystem::path& path) {
  const auto doc = read_feature_collection(path);
  TractSet set;
  std::size_t k = 0;
  for (const auto& f : doc.at("features")) {
    const std::string where = path.string() + ", feature " + std::to_string(k++);
    try {
      const auto& props = f.at("properties");
      Tract t;
      t.id = id_string(props.at("tract_id"));
      t.population = props.at("population").get<double>();
      const auto& coc = props.at("is_coc");
      t.is_coc = coc.is_boolean() ? coc.get<bool>() : coc.get<int>() != 0;
      t.ring = read_geojson_outer_ring(f.at("geometry"), where);
      if (!(t.population >= 0.0)) throw LoadError(where + ": negative population");
      set.tracts.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(where + ": " + e.what());
    }
  }
  set.warnings = find_tract_overlaps(set.tracts);
  return set;
}

std::vector<std::string> find_tract_overlaps(const std::vector<Tract>& tracts) {
  std::vector<Ring> rings;
  rings.reserve(tracts.size());
  for (const auto& t : tracts) rings.push_back(t.ring);
  const SpatialIndex idx = SpatialIndex::over_rings(rings);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tracts.size(); ++i) {
    for (std::size_t j : idx.query(bounding_box(tracts[i].ring))) {
      if (j <= i) continue;
      if (rings_overlap(tracts[i].ring, tracts[j].ring)) {
        out.push_back("tracts " + tracts[i].id + " and " + tracts[j].id + " overlap");
      }
    }
  }
  return out;
}

}  // namespace saef
