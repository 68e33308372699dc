#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "distance.hpp"
#include "domain.hpp"

namespace evrp {

enum class NodeKind { Depot, Pickup, Delivery };
enum class ArcKind { EV, Bike };

struct GraphNode {
  NodeKind kind = NodeKind::Depot;
  std::string id;           // request id, "depot" for node 0
  std::string location_id;
  double tau = 0.0;         // time bound of the request
  double rho = 0.0;         // charge of the request
};

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  ArcKind kind = ArcKind::Bike;
  double distance_km = 0.0;
  double op_time_min = 0.0;
};

// Node 0 is the depot; request nodes follow in lexicographic id order.
// Adjacency lists hold arc indices sorted by the opposite endpoint.
class ActionGraph {
 public:
  static constexpr std::size_t kDepot = 0;
  static constexpr std::size_t kNoArc = static_cast<std::size_t>(-1);

  ActionGraph() = default;
  // Assembles a graph from explicit parts; node-to-node distances are kept
  // for callers that need legs outside the arc set.
  ActionGraph(Parameters params, std::vector<GraphNode> nodes, std::vector<Arc> arcs,
              std::vector<double> node_distances);

  const Parameters& parameters() const { return params_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  const GraphNode& node(std::size_t i) const { return nodes_[i]; }
  const std::vector<GraphNode>& nodes() const { return nodes_; }
  const Arc& arc(std::size_t a) const { return arcs_[a]; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<std::size_t>& out_arcs(std::size_t i) const { return out_[i]; }
  const std::vector<std::size_t>& in_arcs(std::size_t i) const { return in_[i]; }

  std::size_t arc_index(std::size_t from, std::size_t to) const { return lookup_[from * nodes_.size() + to]; }
  bool has_arc(std::size_t from, std::size_t to) const { return arc_index(from, to) != kNoArc; }
  const Arc* find_arc(std::size_t from, std::size_t to) const {
    auto a = arc_index(from, to);
    return a == kNoArc ? nullptr : &arcs_[a];
  }

  // Driving distance between two nodes regardless of arc existence.
  double distance(std::size_t from, std::size_t to) const { return dist_[from * nodes_.size() + to]; }

  std::optional<std::size_t> node_of(const std::string& request_id) const;
  bool is_pickup(std::size_t i) const { return nodes_[i].kind == NodeKind::Pickup; }
  bool is_delivery(std::size_t i) const { return nodes_[i].kind == NodeKind::Delivery; }
  std::size_t pickup_count() const;
  std::size_t delivery_count() const;

  // Graphviz rendering; node labels carry id/kind/tau/rho, arcs kind/c/d.
  std::string to_dot() const;

 private:
  Parameters params_;
  std::vector<GraphNode> nodes_;
  std::vector<Arc> arcs_;
  std::vector<double> dist_;
  std::vector<std::size_t> lookup_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

// EV arcs p->d when tau_d >= tau_p + d/s' + q' + q'' and d <= L; bike arcs
// d->p when tau_p >= tau_d + d/s'' + q''; depot arcs to every pickup and
// from every delivery. Unreachable (infinite) legs are omitted.
ActionGraph build_graph(const Instance& instance, const DistanceMatrix& distances);

// |A| < |N|^2.
bool arc_count_bound_check(const ActionGraph& graph);

}  // namespace evrp
