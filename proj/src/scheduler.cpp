#include <algorithm>
#include <cmath>
#include <sstream>

#include "solver.hpp"

namespace evrp {

namespace detail {

// Time window on the pickup service time of one leg, derived from the pickup
// earliest time, the range needed for the drive, the delivery deadline and the
// charge the EV must reach by that deadline. `charge_gap` is the part of the
// charge condition that does not depend on time; it must be non-negative.
struct LegWindow {
  double earliest = 0.0;
  double latest = 0.0;
  double charge_gap = 0.0;
  double drive_min = 0.0;
  double distance_km = 0.0;
};

LegWindow leg_window(const ActionGraph& graph, const Arc& ev) {
  const auto& p = graph.parameters();
  const auto& pick = graph.node(ev.from);
  const auto& drop = graph.node(ev.to);
  const double L = p.max_range_km;
  const double G = p.recharge_time_min;
  const double need = ev.distance_km / L;
  LegWindow w;
  w.distance_km = ev.distance_km;
  w.drive_min = ev.op_time_min;
  w.earliest = std::max(pick.tau, pick.tau + G * (need - pick.rho));
  w.latest = std::min(drop.tau, drop.tau + G * (1.0 - need - drop.rho)) - ev.op_time_min;
  w.charge_gap = pick.rho - need + (drop.tau - pick.tau - ev.op_time_min) / G - drop.rho;
  return w;
}

}  // namespace detail

namespace {

std::string label(const ActionGraph& g, std::size_t i) { return g.node(i).id; }

}  // namespace

ScheduleResult schedule_route(const ActionGraph& graph, std::span<const Leg> legs, std::optional<double> horizon) {
  const auto& p = graph.parameters();
  const double T = horizon.value_or(p.shift_limit_min);
  ScheduleResult res;
  if (legs.empty()) {
    res.feasible = true;
    res.windows_ok = true;
    return res;
  }

  const auto m = legs.size();
  std::vector<detail::LegWindow> win(m);
  std::vector<double> bike(m, 0.0);  // ride after leg l (to next pickup or depot)
  for (std::size_t l = 0; l < m; ++l) {
    const auto& leg = legs[l];
    if (!graph.is_pickup(leg.pickup) || !graph.is_delivery(leg.delivery))
      throw ArgumentError("leg " + std::to_string(l) + " does not go from a pickup to a delivery");
    const Arc* ev = graph.find_arc(leg.pickup, leg.delivery);
    if (!ev) throw ArgumentError("no EV arc " + label(graph, leg.pickup) + " -> " + label(graph, leg.delivery));
    win[l] = detail::leg_window(graph, *ev);
    std::size_t next = l + 1 < m ? legs[l + 1].pickup : ActionGraph::kDepot;
    const Arc* ride = graph.find_arc(leg.delivery, next);
    if (!ride)
      throw ArgumentError("no bike arc " + label(graph, leg.delivery) + " -> " +
                          (next == ActionGraph::kDepot ? std::string("depot") : label(graph, next)));
    bike[l] = ride->op_time_min;
  }
  const Arc* out = graph.find_arc(ActionGraph::kDepot, legs[0].pickup);
  if (!out) throw ArgumentError("no bike arc depot -> " + label(graph, legs[0].pickup));
  // Departure time is non-negative.
  win[0].earliest = std::max(win[0].earliest, out->op_time_min);

  for (std::size_t l = 0; l < m; ++l) {
    if (win[l].charge_gap < -kChargeTol) {
      res.reason = "leg " + label(graph, legs[l].pickup) + " -> " + label(graph, legs[l].delivery) +
                   ": the EV cannot reach the required charge by the delivery deadline";
      return res;
    }
  }

  // Earliest schedule.
  std::vector<double> t(m);
  for (std::size_t l = 0; l < m; ++l) {
    t[l] = l == 0 ? win[0].earliest : std::max(win[l].earliest, t[l - 1] + win[l - 1].drive_min + bike[l - 1]);
    if (t[l] > win[l].latest + kTimeTol) {
      std::ostringstream os;
      os << "leg " << label(graph, legs[l].pickup) << " -> " << label(graph, legs[l].delivery)
         << ": earliest service at " << t[l] << " misses its latest start " << win[l].latest;
      res.reason = os.str();
      return res;
    }
  }
  res.windows_ok = true;

  // Latest start of the first pickup that keeps every later window.
  double latest_start = win[m - 1].latest;
  for (std::size_t l = m - 1; l-- > 0;) latest_start = std::min(win[l].latest, latest_start - win[l].drive_min - bike[l]);
  // Start after which no waiting remains.
  double flat = win[0].earliest, work = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    flat = std::max(flat, win[l].earliest - work);
    work += win[l].drive_min + bike[l];
  }
  double start = std::max(t[0], std::min(latest_start, flat));

  for (std::size_t l = 0; l < m; ++l) {
    t[l] = l == 0 ? start : std::max(win[l].earliest, t[l - 1] + win[l - 1].drive_min + bike[l - 1]);
  }

  const double G = p.recharge_time_min;
  res.pickup_times = t;
  res.delivery_times.resize(m);
  res.charges.resize(m);
  for (std::size_t l = 0; l < m; ++l) {
    const auto& pick = graph.node(legs[l].pickup);
    const auto& drop = graph.node(legs[l].delivery);
    res.delivery_times[l] = t[l] + win[l].drive_min;
    auto& c = res.charges[l];
    c.at_pickup = std::min(1.0, pick.rho + (t[l] - pick.tau) / G);
    c.at_delivery = c.at_pickup - win[l].distance_km / p.max_range_km;
    c.at_deadline = std::min(1.0, c.at_delivery + (drop.tau - res.delivery_times[l]) / G);
  }
  res.depot_departure_min = t[0] - out->op_time_min;
  res.depot_return_min = res.delivery_times[m - 1] + bike[m - 1];
  res.span_to_last_delivery = res.delivery_times[m - 1] - res.depot_departure_min;
  if (res.duration() > T + kTimeTol) {
    std::ostringstream os;
    os << "route duration " << res.duration() << " exceeds the limit " << T;
    res.reason = os.str();
    return res;
  }
  res.feasible = true;
  return res;
}

ScheduleResult schedule_route(const ActionGraph& graph, const std::vector<std::pair<std::string, std::string>>& legs) {
  std::vector<Leg> seq;
  for (const auto& [pick, drop] : legs) {
    auto a = graph.node_of(pick);
    auto b = graph.node_of(drop);
    if (!a) throw ArgumentError("unknown request '" + pick + "'");
    if (!b) throw ArgumentError("unknown request '" + drop + "'");
    seq.push_back({*a, *b});
  }
  return schedule_route(graph, seq);
}

Route to_route(const ActionGraph& graph, std::span<const Leg> legs, const ScheduleResult& schedule, int worker) {
  Route r;
  r.worker_index = worker;
  for (std::size_t l = 0; l < legs.size(); ++l) {
    r.visits.push_back({graph.node(legs[l].pickup).id, schedule.pickup_times[l]});
    r.visits.push_back({graph.node(legs[l].delivery).id, schedule.delivery_times[l]});
  }
  r.depot_departure_min = schedule.depot_departure_min;
  r.depot_return_min = schedule.depot_return_min;
  return r;
}

std::vector<Leg> compatible_legs(const ActionGraph& graph) {
  std::vector<Leg> out;
  for (const auto& arc : graph.arcs()) {
    if (arc.kind != ArcKind::EV) continue;
    auto w = detail::leg_window(graph, arc);
    if (w.charge_gap >= -kChargeTol && w.earliest <= w.latest + kTimeTol) out.push_back({arc.from, arc.to});
  }
  return out;
}

int objective_of(const Solution& solution) { return static_cast<int>(served_count(solution)); }

}  // namespace evrp
