#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "saef/geometry.hpp"

namespace saef {

using NodeId = std::int64_t;
using LinkId = std::int64_t;

/// Dense position of a node or link inside a Network. All solver arrays are
/// indexed this way; ids only appear at the file boundary.
using NodeIndex = std::uint32_t;
using LinkIndex = std::uint32_t;

struct Node {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
};

struct Link {
  LinkId id = 0;
  NodeId from = 0;
  NodeId to = 0;
  double length_miles = 0.0;
  double speed_mph = 0.0;
  double capacity_vph = 0.0;  // whole link, not per lane
  int fclass = 5;
  int lanes = 1;
  Polyline geometry;
};

/// Free-flow traversal time in hours.
inline double free_flow_time(const Link& link) { return link.length_miles / link.speed_mph; }

struct ValidationReport {
  std::vector<std::string> warnings;
  /// Nodes outside the largest weakly connected component.
  std::vector<NodeId> orphans;
  /// Fraction of nodes in the largest weakly connected component.
  double primary_component_share = 1.0;
  bool primary_component_ok = true;  // share >= 0.9
};

/// Immutable directed road graph.
class Network {
 public:
  Network() = default;
  /// Validates and indexes. Throws LoadError on invariant violations.
  Network(std::vector<Node> nodes, std::vector<Link> links);

  std::span<const Node> nodes() const { return nodes_; }
  std::span<const Link> links() const { return links_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const Node& node(NodeIndex i) const { return nodes_[i]; }
  const Link& link(LinkIndex i) const { return links_[i]; }

  std::optional<NodeIndex> find_node(NodeId id) const;
  std::optional<LinkIndex> find_link(LinkId id) const;
  NodeIndex node_index(NodeId id) const;  // throws std::out_of_range
  LinkIndex link_index(LinkId id) const;

  NodeIndex tail(LinkIndex l) const { return tails_[l]; }
  NodeIndex head(LinkIndex l) const { return heads_[l]; }

  /// Outgoing links of a node, ordered by link id.
  std::span<const LinkIndex> outgoing(NodeIndex n) const {
    return {out_links_.data() + out_offsets_[n], out_offsets_[n + 1] - out_offsets_[n]};
  }

  const ValidationReport& validation() const { return report_; }

  double total_length_miles() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::unordered_map<NodeId, NodeIndex> node_lookup_;
  std::unordered_map<LinkId, LinkIndex> link_lookup_;
  std::vector<NodeIndex> tails_, heads_;
  std::vector<std::size_t> out_offsets_;
  std::vector<LinkIndex> out_links_;
  ValidationReport report_;
};

/// Reads `node_id,x,y` and `link_id,from,to,length_miles,speed_mph,
/// capacity_vph,fclass,lanes,wkt_geometry`. Link order follows row order.
Network load_network(const std::filesystem::path& nodes_csv, const std::filesystem::path& links_csv);

void save_network(const Network& net, const std::filesystem::path& nodes_csv,
                  const std::filesystem::path& links_csv);

}  // namespace saef
