#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "domain.hpp"

namespace evrp {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

struct RoadLink {
  std::size_t from = 0;
  std::size_t to = 0;
  double length_km = 0.0;
};

// Directed road graph with string node ids.
class RoadNetwork {
 public:
  std::size_t add_node(const std::string& id, std::optional<Coordinates> coords = {});
  void add_link(const std::string& from, const std::string& to, double length_km);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t link_count() const { return links_.size(); }
  const std::string& node_id(std::size_t index) const { return ids_[index]; }
  std::optional<std::size_t> index_of(const std::string& id) const;
  const std::vector<RoadLink>& links() const { return links_; }
  const std::vector<std::size_t>& out_links(std::size_t node) const { return out_[node]; }

  // Label-setting single-source shortest paths; +inf for unreachable nodes.
  std::vector<double> shortest_from(std::size_t source) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::optional<Coordinates>> coords_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<RoadLink> links_;
  std::vector<std::vector<std::size_t>> out_;
};

// Reads node records "id,x,y" and link records "from,to,length_km". A header
// line is skipped when its numeric fields do not parse. Errors name the line.
RoadNetwork load_road_network(std::istream& nodes_csv, std::istream& links_csv);
RoadNetwork load_road_network_files(const std::string& nodes_path, const std::string& links_path);

// Dense asymmetric distance matrix over labelled points (km).
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool contains(const std::string& label) const { return index_.count(label) != 0; }
  std::size_t index(const std::string& label) const;

  double at(std::size_t i, std::size_t j) const { return values_[i * labels_.size() + j]; }
  void set(std::size_t i, std::size_t j, double km) { values_[i * labels_.size() + j] = km; }
  double between(const std::string& from, const std::string& to) const {
    return at(index(from), index(to));
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> values_;
};

// Matrix over location ids; entry (i,j) is the shortest directed path between
// the locations' network nodes. One Dijkstra run per distinct source; runs are
// spread over `threads` workers (0 = hardware concurrency).
DistanceMatrix shortest_path_matrix(const RoadNetwork& network, std::span<const Location> locations,
                                    unsigned threads = 1);

// detour_factor times the straight-line distance; needs coordinates.
DistanceMatrix euclidean_matrix(std::span<const Location> locations, double detour_factor);

// Restricts a node-labelled matrix to the given locations, keyed by location id.
DistanceMatrix matrix_for_locations(const DistanceMatrix& by_node, std::span<const Location> locations);

// Resolves the instance's distance source into a matrix over depot and
// request location ids.
DistanceMatrix build_distances(const Instance& instance);

// Distinct locations (by id) of the depot followed by every request.
std::vector<Location> instance_locations(const Instance& instance);

}  // namespace evrp
