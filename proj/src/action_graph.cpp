#include "action_graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace evrp {

ActionGraph::ActionGraph(Parameters params, std::vector<GraphNode> nodes, std::vector<Arc> arcs,
                         std::vector<double> node_distances)
    : params_(params), nodes_(std::move(nodes)), arcs_(std::move(arcs)), dist_(std::move(node_distances)) {
  const auto n = nodes_.size();
  if (dist_.empty()) dist_.assign(n * n, kUnreachable);
  if (dist_.size() != n * n) throw ArgumentError("node distance table has wrong size");
  std::sort(arcs_.begin(), arcs_.end(),
            [](const Arc& a, const Arc& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  lookup_.assign(n * n, kNoArc);
  out_.assign(n, {});
  in_.assign(n, {});
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    const auto& arc = arcs_[a];
    if (arc.from >= n || arc.to >= n) throw ArgumentError("arc endpoint out of range");
    if (arc.from == arc.to) throw ArgumentError("self loop in action graph");
    if (lookup_[arc.from * n + arc.to] != kNoArc) throw ArgumentError("parallel arcs in action graph");
    lookup_[arc.from * n + arc.to] = a;
    out_[arc.from].push_back(a);
    in_[arc.to].push_back(a);
  }
  for (auto& in : in_)
    std::sort(in.begin(), in.end(), [&](std::size_t a, std::size_t b) { return arcs_[a].from < arcs_[b].from; });
}

std::optional<std::size_t> ActionGraph::node_of(const std::string& request_id) const {
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (nodes_[i].id == request_id) return i;
  return std::nullopt;
}

std::size_t ActionGraph::pickup_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                [](const GraphNode& v) { return v.kind == NodeKind::Pickup; }));
}

std::size_t ActionGraph::delivery_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                [](const GraphNode& v) { return v.kind == NodeKind::Delivery; }));
}

std::string ActionGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph G {\n";
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& v = nodes_[i];
    os << "  n" << i << " [label=\"";
    if (v.kind == NodeKind::Depot) {
      os << "depot";
    } else {
      os << v.id << "\\n" << (v.kind == NodeKind::Pickup ? "P" : "D") << " tau=" << v.tau << " rho=" << v.rho;
    }
    os << "\"" << (v.kind == NodeKind::Depot ? ", shape=box" : "") << "];\n";
  }
  for (const auto& a : arcs_) {
    os << "  n" << a.from << " -> n" << a.to << " [label=\"" << (a.kind == ArcKind::EV ? "EV" : "bike")
       << " c=" << a.op_time_min << " d=" << a.distance_km << "\"" << (a.kind == ArcKind::Bike ? ", style=dashed" : "")
       << "];\n";
  }
  os << "}\n";
  return os.str();
}

ActionGraph build_graph(const Instance& instance, const DistanceMatrix& distances) {
  instance.validate();
  const auto& p = instance.parameters;

  std::vector<std::size_t> order(instance.requests.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return instance.requests[a].id < instance.requests[b].id; });

  std::vector<GraphNode> nodes;
  nodes.push_back({NodeKind::Depot, "depot", instance.depot.id, 0.0, 0.0});
  for (auto idx : order) {
    const auto& r = instance.requests[idx];
    nodes.push_back({r.is_pickup() ? NodeKind::Pickup : NodeKind::Delivery, r.id, r.location.id, r.time_min, r.charge});
  }

  const auto n = nodes.size();
  std::vector<std::size_t> row(n);
  for (std::size_t i = 0; i < n; ++i) row[i] = distances.index(nodes[i].location_id);
  std::vector<double> dist(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = i == j ? 0.0 : distances.at(row[i], row[j]);

  const double handling = p.park_and_unload_min + p.load_and_exit_min;
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = dist[i * n + j];
      if (!std::isfinite(d)) continue;
      const auto& a = nodes[i];
      const auto& b = nodes[j];
      if (a.kind == NodeKind::Pickup && b.kind == NodeKind::Delivery) {
        const double c = minutes_of(p.ev_speed_kmh, d) + handling;
        if (d <= p.max_range_km && b.tau + kTimeTol >= a.tau + c) arcs.push_back({i, j, ArcKind::EV, d, c});
      } else if (a.kind == NodeKind::Delivery && b.kind == NodeKind::Pickup) {
        const double ride = minutes_of(p.bike_speed_kmh, d);
        if (b.tau + kTimeTol >= a.tau + ride + p.load_and_exit_min) arcs.push_back({i, j, ArcKind::Bike, d, ride});
      } else if ((a.kind == NodeKind::Depot && b.kind == NodeKind::Pickup) ||
                 (a.kind == NodeKind::Delivery && b.kind == NodeKind::Depot)) {
        arcs.push_back({i, j, ArcKind::Bike, d, minutes_of(p.bike_speed_kmh, d)});
      }
    }
  }
  return ActionGraph(p, std::move(nodes), std::move(arcs), std::move(dist));
}

bool arc_count_bound_check(const ActionGraph& graph) {
  return graph.arc_count() < graph.node_count() * graph.node_count();
}

}  // namespace evrp
