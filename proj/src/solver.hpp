#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "action_graph.hpp"
#include "domain.hpp"

namespace evrp {

// One EV move: drive from a pickup node to a delivery node.
struct Leg {
  std::size_t pickup = 0;
  std::size_t delivery = 0;
  bool operator==(const Leg&) const = default;
};

struct LegCharge {
  double at_pickup = 0.0;    // when the worker drives off
  double at_delivery = 0.0;  // when the EV is parked at the delivery
  double at_deadline = 0.0;  // after recharging until the delivery deadline
};

struct ScheduleResult {
  bool feasible = false;
  std::string reason;  // set when infeasible
  std::vector<double> pickup_times;
  std::vector<double> delivery_times;
  std::vector<LegCharge> charges;
  double depot_departure_min = 0.0;
  double depot_return_min = 0.0;
  // Shortest achievable span from depot departure to the last delivery.
  // Valid whenever the time windows and charges admit a schedule, even if
  // the return leg pushes the duration over the limit.
  double span_to_last_delivery = 0.0;
  bool windows_ok = false;

  double duration() const { return depot_return_min - depot_departure_min; }
};

// Times a fixed sequence of legs. Each pickup is served as early as its
// window, its predecessor and the charge needed for the next leg allow; the
// whole route is then shifted to the latest start that does not increase
// any waiting, which minimizes the route duration. `horizon` replaces the
// shift limit when given. Throws ArgumentError when a leg or connection is
// not an arc of the graph.
ScheduleResult schedule_route(const ActionGraph& graph, std::span<const Leg> legs,
                              std::optional<double> horizon = std::nullopt);

// Same, addressing requests by id.
ScheduleResult schedule_route(const ActionGraph& graph,
                              const std::vector<std::pair<std::string, std::string>>& legs);

Route to_route(const ActionGraph& graph, std::span<const Leg> legs, const ScheduleResult& schedule, int worker);

struct CheckRow {
  int family = 0;
  std::string row;
  bool satisfied = true;
  double slack = 0.0;
};

struct ValidationReport {
  std::vector<CheckRow> rows;

  bool passed() const;
  std::size_t failures() const;
  std::size_t count(int family) const;
  nlohmann::ordered_json to_json() const;
};

// Evaluates the constraint families 2-11 (plus 12 for arc membership and 13
// for depot departure) on the routes and visit times of a solution, with the
// pickup charge capped at a full battery. Throws ArgumentError for request
// ids unknown to the instance.
ValidationReport check_solution(const Instance& instance, const ActionGraph& graph, const Solution& solution);

struct SolveOptions {
  bool symmetry_breaking = false;
  bool use_upper_bound = false;          // compute the relaxed bound first
  std::optional<int> upper_bound;        // externally supplied bound
  bool use_warm_start = false;           // seed with the sequential heuristic
  bool deterministic = true;             // sequential search
  unsigned threads = 0;                  // non-deterministic mode; 0 = hardware
  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit_s;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  double seconds = 0.0;
  std::optional<int> upper_bound;
  int warm_start_value = -1;
};

struct SolveResult {
  Solution solution;
  int objective = 0;
  bool optimal = false;
  SolveStats stats;
};

// Depth-first search over routes built one leg at a time, worker after
// worker. Nodes are pruned when a route prefix cannot be scheduled or when
// served + 2 * (maximum matching of the remaining compatible legs), capped
// by the upper bound, cannot beat the incumbent. `optimal` is false when a
// limit stopped the search.
SolveResult solve_branch_and_bound(const Instance& instance, const ActionGraph& graph, const SolveOptions& options,
                                   int workers);

// Exhaustive oracle: every pickup-delivery pairing, every split into at most
// `workers` sequences, every order. Throws LimitError above 10 requests.
Solution brute_force(const Instance& instance, const ActionGraph& graph, int workers);
inline constexpr std::size_t kBruteForceLimit = 10;

// Route worker k optimally on the requests left by workers 1..k-1.
SolveResult heuristic_sequential(const Instance& instance, const ActionGraph& graph, int workers,
                                 const SolveOptions& limits = {});

struct UpperBound {
  int value = 0;
  bool exact = false;  // false: the matching fallback was returned
};

// Optimum of a single-worker relaxation with working time workers * T, no
// pickup or delivery time bounds, and time-free bike connections (direct or
// through the depot). Each leg must still be servable on its own under the
// charge and time constraints. Valid for every feasible solution with at most
// `workers` routes.
UpperBound compute_upper_bound(const Instance& instance, const ActionGraph& graph, int workers,
                               const SolveOptions& limits = {});

// Legs whose EV arc exists and which can be scheduled as a one-leg route
// ignoring the shift limit.
std::vector<Leg> compatible_legs(const ActionGraph& graph);

int objective_of(const Solution& solution);

}  // namespace evrp
