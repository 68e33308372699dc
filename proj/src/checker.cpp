#include <algorithm>
#include <map>

#include "solver.hpp"

namespace evrp {

bool ValidationReport::passed() const { return failures() == 0; }

std::size_t ValidationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const CheckRow& r) { return !r.satisfied; }));
}

std::size_t ValidationReport::count(int family) const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [&](const CheckRow& r) { return r.family == family; }));
}

nlohmann::ordered_json ValidationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["format_version"] = 1;
  doc["passed"] = passed();
  doc["failures"] = failures();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    arr.push_back({{"family", r.family}, {"row", r.row}, {"satisfied", r.satisfied}, {"slack", r.slack}});
  doc["rows"] = std::move(arr);
  return doc;
}

ValidationReport check_solution(const Instance& instance, const ActionGraph& graph, const Solution& solution) {
  const auto& p = instance.parameters;
  const int K = p.workers;
  const double T = p.shift_limit_min;
  const double L = p.max_range_km;
  const double G = p.recharge_time_min;
  const double charge_tol = kChargeTol + kTimeTol / G;
  const auto N = graph.node_count();

  ValidationReport rep;
  auto add = [&](int family, std::string row, double slack, double tol) {
    rep.rows.push_back({family, std::move(row), slack >= -tol, slack});
  };
  auto name = [&](std::size_t i) { return i == ActionGraph::kDepot ? std::string("depot") : graph.node(i).id; };

  struct Walk {
    int k;
    std::vector<std::size_t> nodes;  // depot, visits..., depot
    std::vector<double> times;       // departure, visit times
    const Route* route;
  };
  std::vector<Walk> walks;
  for (const auto& route : solution.routes) {
    if (route.visits.empty()) continue;
    Walk w{route.worker_index, {ActionGraph::kDepot}, {route.depot_departure_min}, &route};
    for (const auto& v : route.visits) {
      if (!instance.find(v.request_id)) throw ArgumentError("request '" + v.request_id + "' is not in the instance");
      w.nodes.push_back(*graph.node_of(v.request_id));
      w.times.push_back(v.time_min);
    }
    w.nodes.push_back(ActionGraph::kDepot);
    walks.push_back(std::move(w));
  }

  // (2) one departure per worker.
  std::vector<int> departures(K, 0);
  for (const auto& w : walks) {
    if (w.k < 0 || w.k >= K)
      add(2, "worker " + std::to_string(w.k) + " does not exist", -1.0, 0.0);
    else
      ++departures[w.k];
  }
  for (int k = 0; k < K; ++k) add(2, "worker " + std::to_string(k + 1), 1.0 - departures[k], 0.0);

  // (3) each request at most once.
  std::vector<int> visits(N, 0);
  for (const auto& w : walks)
    for (std::size_t s = 1; s + 1 < w.nodes.size(); ++s) ++visits[w.nodes[s]];
  for (std::size_t i = 1; i < N; ++i) add(3, name(i), 1.0 - visits[i], 0.0);

  // (12) every move is an arc of the graph.
  for (const auto& w : walks)
    for (std::size_t s = 0; s + 1 < w.nodes.size(); ++s)
      add(12, "arc " + name(w.nodes[s]) + " -> " + name(w.nodes[s + 1]) + ", worker " + std::to_string(w.k + 1),
          graph.has_arc(w.nodes[s], w.nodes[s + 1]) ? 0.0 : -1.0, 0.0);

  // (4) flow conservation.
  std::vector<std::vector<int>> balance(std::max(K, 1), std::vector<int>(N, 0));
  for (const auto& w : walks) {
    if (w.k < 0 || w.k >= K) continue;
    for (std::size_t s = 0; s + 1 < w.nodes.size(); ++s) {
      ++balance[w.k][w.nodes[s]];
      --balance[w.k][w.nodes[s + 1]];
    }
  }
  for (std::size_t i = 0; i < N; ++i)
    for (int k = 0; k < K; ++k)
      add(4, name(i) + ", worker " + std::to_string(k + 1), -std::abs(balance[k][i]), 0.0);

  for (const auto& w : walks) {
    const auto ks = ", worker " + std::to_string(w.k + 1);
    const auto last = w.nodes.size() - 2;
    add(13, "depot departure" + ks, w.times[0], kTimeTol);
    for (std::size_t s = 0; s + 1 < w.nodes.size(); ++s) {
      const auto i = w.nodes[s], j = w.nodes[s + 1];
      const Arc* arc = graph.find_arc(i, j);
      if (!arc) continue;
      if (j != ActionGraph::kDepot)
        add(5, name(i) + " -> " + name(j) + ks, w.times[s + 1] - w.times[s] - arc->op_time_min, kTimeTol);
      else
        add(6, name(i) + ks, T - (w.times[last] + arc->op_time_min - w.times[0]), kTimeTol);
    }
    for (std::size_t s = 1; s + 1 < w.nodes.size(); ++s) {
      const auto& v = graph.node(w.nodes[s]);
      if (v.kind == NodeKind::Pickup)
        add(7, name(w.nodes[s]) + ks, w.times[s] - v.tau, kTimeTol);
      else
        add(8, name(w.nodes[s]) + ks, v.tau - w.times[s], kTimeTol);
    }
    for (std::size_t s = 1; s + 1 < w.nodes.size(); ++s) {
      const auto i = w.nodes[s], j = w.nodes[s + 1];
      const Arc* arc = graph.find_arc(i, j);
      if (!arc || arc->kind != ArcKind::EV) continue;
      const auto& pick = graph.node(i);
      const auto& drop = graph.node(j);
      const double charge = std::min(1.0, pick.rho + (w.times[s] - pick.tau) / G);
      const double used = arc->distance_km / L;
      const double needed = drop.rho - (drop.tau - w.times[s + 1]) / G;
      const auto row = name(i) + " -> " + name(j) + ks;
      add(9, row, L * charge - arc->distance_km, charge_tol * L);
      add(10, row, charge - used - needed, charge_tol);
      add(11, row, 1.0 - used - needed, charge_tol);
    }
  }

  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const CheckRow& a, const CheckRow& b) { return a.family < b.family; });
  return rep;
}

}  // namespace evrp
