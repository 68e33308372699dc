#pragma once

// Core data model for the electric vehicle relocation problem. All times are
// minutes since midnight, distances are km, charges are battery fractions.

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"

namespace evrp {

inline constexpr double kTimeTol = 1e-6;
inline constexpr double kChargeTol = 1e-9;

struct Parameters {
  double max_range_km = 150.0;       // full-battery range
  double recharge_time_min = 240.0;  // empty to full, linear phase only
  double shift_limit_min = 300.0;    // max route duration per worker
  int workers = 1;
  double ev_speed_kmh = 25.0;
  double bike_speed_kmh = 15.0;
  double park_and_unload_min = 1.0;  // park EV, take bike out of the trunk
  double load_and_exit_min = 1.0;    // load bike, drive out of the parking

  // Throws ArgumentError unless every field is strictly positive.
  void validate() const;
};

struct Coordinates {
  double x_km = 0.0;
  double y_km = 0.0;
};

struct Location {
  std::string id;
  // Key into the distance provider (road node id or matrix label). Empty
  // means "same as id".
  std::string network_node;
  std::optional<Coordinates> coords;

  const std::string& node_key() const { return network_node.empty() ? id : network_node; }
};

enum class RequestKind { Pickup, Delivery };

const char* to_string(RequestKind kind);

struct Request {
  std::string id;
  RequestKind kind = RequestKind::Pickup;
  Location location;
  // Pickup: residual charge. Delivery: charge required at time_min.
  double charge = 0.0;
  // Pickup: earliest pickup time. Delivery: latest delivery time.
  double time_min = 0.0;

  bool is_pickup() const { return kind == RequestKind::Pickup; }
};

struct EuclideanSource {
  double detour_factor = 1.3;
};

// Explicit matrix keyed by network node labels.
struct MatrixSource {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;  // +inf for unreachable
  std::string file;                       // alternative: load from JSON file
};

struct RoadNetworkSource {
  std::string nodes_file;
  std::string links_file;
};

using DistanceSource = std::variant<EuclideanSource, MatrixSource, RoadNetworkSource>;

struct Instance {
  std::string name;
  Parameters parameters;
  Location depot;
  std::vector<Request> requests;
  DistanceSource distance_source = EuclideanSource{};
  // Directory that relative file references in distance_source resolve against.
  std::string base_dir;

  // Throws on duplicate ids or out-of-range fields.
  void validate() const;

  const Request* find(const std::string& request_id) const;
  std::size_t pickup_count() const;
  std::size_t delivery_count() const;
};

struct Visit {
  std::string request_id;
  double time_min = 0.0;
};

struct Route {
  int worker_index = 0;
  std::vector<Visit> visits;  // alternating pickup, delivery
  double depot_departure_min = 0.0;
  double depot_return_min = 0.0;
};

struct Solution {
  std::vector<Route> routes;
};

// Number of distinct requests visited. Throws StructureError when a request
// appears more than once across the solution.
std::size_t served_count(const Solution& solution);

// distance / speed in minutes. Throws ArgumentError for speed <= 0.
double minutes_of(double speed_kmh, double distance_km);

// Range available at a given charge fraction.
double range_km(double charge, const Parameters& params);

// Charge after parking for the given minutes, capped at a full battery.
double recharge(double charge, double parked_min, const Parameters& params);

}  // namespace evrp
