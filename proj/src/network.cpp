#include "saef/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "saef/csv.hpp"

namespace saef {

namespace {

void check_link(const Link& l, const std::string& where) {
  if (!(l.length_miles > 0.0)) throw LoadError("nonpositive length, " + where);
  if (!(l.speed_mph > 0.0)) throw LoadError("nonpositive speed, " + where);
  if (!(l.capacity_vph > 0.0)) throw LoadError("nonpositive capacity, " + where);
  if (l.fclass < 1 || l.fclass > 5) throw LoadError("fclass outside 1..5, " + where);
  if (l.lanes < 1 || l.lanes > 8) throw LoadError("lanes outside 1..8, " + where);
  if (l.from == l.to) throw LoadError("self-loop link, " + where);
  if (l.geometry.size() < 2) throw LoadError("geometry needs at least 2 points, " + where);
}

// Union-find over node indices for the weakly connected component check.
struct Components {
  std::vector<NodeIndex> parent;
  explicit Components(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  NodeIndex find(NodeIndex x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(NodeIndex a, NodeIndex b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

Network::Network(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  node_lookup_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (!std::isfinite(n.x) || !std::isfinite(n.y)) {
      throw LoadError("non-finite coordinates for node " + std::to_string(n.id));
    }
    if (!node_lookup_.emplace(n.id, static_cast<NodeIndex>(i)).second) {
      throw LoadError("duplicate node id " + std::to_string(n.id));
    }
  }

  tails_.resize(links_.size());
  heads_.resize(links_.size());
  link_lookup_.reserve(links_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    const std::string where = "link " + std::to_string(l.id);
    check_link(l, where);
    if (!link_lookup_.emplace(l.id, static_cast<LinkIndex>(i)).second) {
      throw LoadError("duplicate link id " + std::to_string(l.id));
    }
    auto from = node_lookup_.find(l.from);
    auto to = node_lookup_.find(l.to);
    if (from == node_lookup_.end() || to == node_lookup_.end()) {
      throw LoadError("dangling node reference, " + where);
    }
    tails_[i] = from->second;
    heads_[i] = to->second;

    const double drawn = polyline_length(l.geometry) / kMetersPerMile;
    if (std::abs(drawn - l.length_miles) > 0.05 * l.length_miles) {
      report_.warnings.push_back(where + ": geometry length " + format_double(drawn) +
                                 " mi differs from declared " + format_double(l.length_miles) +
                                 " mi by more than 5%");
    }
  }

  // CSR adjacency, each node's links sorted by id.
  out_offsets_.assign(nodes_.size() + 1, 0);
  for (NodeIndex t : tails_) ++out_offsets_[t + 1];
  std::partial_sum(out_offsets_.begin(), out_offsets_.end(), out_offsets_.begin());
  out_links_.resize(links_.size());
  std::vector<std::size_t> fill(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::size_t i = 0; i < links_.size(); ++i) out_links_[fill[tails_[i]]++] = static_cast<LinkIndex>(i);
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    std::sort(out_links_.begin() + out_offsets_[n], out_links_.begin() + out_offsets_[n + 1],
              [&](LinkIndex a, LinkIndex b) { return links_[a].id < links_[b].id; });
  }

  if (!nodes_.empty()) {
    Components comps(nodes_.size());
    for (std::size_t i = 0; i < links_.size(); ++i) comps.unite(tails_[i], heads_[i]);
    std::vector<std::size_t> sizes(nodes_.size(), 0);
    for (NodeIndex n = 0; n < nodes_.size(); ++n) ++sizes[comps.find(n)];
    const auto largest = static_cast<NodeIndex>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    report_.primary_component_share = static_cast<double>(sizes[largest]) / nodes_.size();
    report_.primary_component_ok = report_.primary_component_share >= 0.9;
    for (NodeIndex n = 0; n < nodes_.size(); ++n) {
      if (comps.find(n) != largest) report_.orphans.push_back(nodes_[n].id);
    }
    if (!report_.primary_component_ok) {
      report_.warnings.push_back("largest connected component holds only " +
                                 format_double(100.0 * report_.primary_component_share) + "% of nodes");
    }
  }
}

std::optional<NodeIndex> Network::find_node(NodeId id) const {
  auto it = node_lookup_.find(id);
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<LinkIndex> Network::find_link(LinkId id) const {
  auto it = link_lookup_.find(id);
  if (it == link_lookup_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::node_index(NodeId id) const {
  auto n = find_node(id);
  if (!n) throw std::out_of_range("unknown node id " + std::to_string(id));
  return *n;
}

LinkIndex Network::link_index(LinkId id) const {
  auto l = find_link(id);
  if (!l) throw std::out_of_range("unknown link id " + std::to_string(id));
  return *l;
}

double Network::total_length_miles() const {
  double total = 0.0;
  for (const Link& l : links_) total += l.length_miles;
  return total;
}

Network load_network(const std::filesystem::path& nodes_csv, const std::filesystem::path& links_csv) {
  const CsvTable nt = read_csv(nodes_csv);
  const std::size_t c_id = nt.column("node_id"), c_x = nt.column("x"), c_y = nt.column("y");
  std::vector<Node> nodes;
  nodes.reserve(nt.rows.size());
  std::unordered_map<NodeId, std::size_t> seen;
  for (const auto& row : nt.rows) {
    Node n{field_int(nt, row, c_id), field_double(nt, row, c_x), field_double(nt, row, c_y)};
    if (!seen.emplace(n.id, row.line).second) {
      throw LoadError(nt.source + ": duplicate node_id, row " + std::to_string(row.line));
    }
    nodes.push_back(n);
  }

  const CsvTable lt = read_csv(links_csv);
  const std::size_t c_lid = lt.column("link_id"), c_from = lt.column("from"), c_to = lt.column("to"),
                    c_len = lt.column("length_miles"), c_spd = lt.column("speed_mph"),
                    c_cap = lt.column("capacity_vph"), c_fc = lt.column("fclass"),
                    c_lanes = lt.column("lanes"), c_wkt = lt.column("wkt_geometry");
  std::vector<Link> links;
  links.reserve(lt.rows.size());
  std::unordered_map<LinkId, std::size_t> seen_links;
  for (const auto& row : lt.rows) {
    const std::string where = "row " + std::to_string(row.line) + " of " + lt.source;
    Link l;
    l.id = field_int(lt, row, c_lid);
    l.from = field_int(lt, row, c_from);
    l.to = field_int(lt, row, c_to);
    l.length_miles = field_double(lt, row, c_len);
    l.speed_mph = field_double(lt, row, c_spd);
    l.capacity_vph = field_double(lt, row, c_cap);
    l.fclass = static_cast<int>(field_int(lt, row, c_fc));
    l.lanes = static_cast<int>(field_int(lt, row, c_lanes));
    try {
      l.geometry = parse_wkt_linestring(row.fields[c_wkt]);
    } catch (const std::invalid_argument& e) {
      throw LoadError(std::string(e.what()) + ", column 'wkt_geometry', " + where);
    }
    if (!seen_links.emplace(l.id, row.line).second) throw LoadError("duplicate link_id, " + where);
    if (!seen.count(l.from)) throw LoadError("dangling node reference in column 'from', " + where);
    if (!seen.count(l.to)) throw LoadError("dangling node reference in column 'to', " + where);
    check_link(l, where);
    links.push_back(std::move(l));
  }
  return Network(std::move(nodes), std::move(links));
}

void save_network(const Network& net, const std::filesystem::path& nodes_csv,
                  const std::filesystem::path& links_csv) {
  std::ofstream nout(nodes_csv, std::ios::binary);
  if (!nout) throw std::runtime_error("cannot write " + nodes_csv.string());
  nout << "node_id,x,y\n";
  for (const Node& n : net.nodes()) {
    write_csv_row(nout, {std::to_string(n.id), format_double(n.x), format_double(n.y)});
  }
  std::ofstream lout(links_csv, std::ios::binary);
  if (!lout) throw std::runtime_error("cannot write " + links_csv.string());
  lout << "link_id,from,to,length_miles,speed_mph,capacity_vph,fclass,lanes,wkt_geometry\n";
  for (const Link& l : net.links()) {
    write_csv_row(lout, {std::to_string(l.id), std::to_string(l.from), std::to_string(l.to),
                         format_double(l.length_miles), format_double(l.speed_mph),
                         format_double(l.capacity_vph), std::to_string(l.fclass), std::to_string(l.lanes),
                         format_wkt_linestring(l.geometry)});
  }
}

}  // namespace saef
