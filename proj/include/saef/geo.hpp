#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "saef/geometry.hpp"
#include "saef/network.hpp"

namespace saef {

/// Bounding-box R-tree over caller-numbered items. Queries return candidate
/// item numbers in ascending order; callers apply the exact predicate.
class SpatialIndex {
 public:
  SpatialIndex();
  explicit SpatialIndex(const std::vector<Box>& boxes);
  SpatialIndex(SpatialIndex&&) noexcept;
  SpatialIndex& operator=(SpatialIndex&&) noexcept;
  ~SpatialIndex();

  std::vector<std::size_t> query(const Box& window) const;
  std::size_t size() const;

  static SpatialIndex over_links(const Network& net);
  static SpatialIndex over_rings(const std::vector<Ring>& rings);

 private:
  struct Tree;
  std::unique_ptr<Tree> tree_;
};

struct School {
  std::string id;
  Point location;
  double pct_minority = 0.0;  // 0..100
  bool is_minority() const { return pct_minority >= 75.0; }
};

struct Tract {
  std::string id;
  Ring ring;
  double population = 0.0;
  bool is_coc = false;
};

struct TractSet {
  std::vector<Tract> tracts;
  std::vector<std::string> warnings;  // overlap diagnostics
};

/// Sorted link indices whose geometry comes within `radius_m` (inclusive).
std::vector<LinkIndex> links_within_radius(Point p, double radius_m, const Network& net,
                                           const SpatialIndex& link_index);

/// Tract containing the link's half-length point; tracts are tried in file
/// order so the first hit wins if tracts overlap.
std::optional<std::size_t> link_tract(const Link& link, const std::vector<Tract>& tracts,
                                      const SpatialIndex& tract_index);

/// `school_id,x,y,pct_minority`
std::vector<School> load_schools(const std::filesystem::path& path);

/// GeoJSON polygons with `tract_id`, `population`, `is_coc`.
TractSet load_tracts(const std::filesystem::path& path);

std::vector<std::string> find_tract_overlaps(const std::vector<Tract>& tracts);

}  // namespace saef
