#include "domain.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace evrp {

const char* to_string(RequestKind kind) {
  return kind == RequestKind::Pickup ? "pickup" : "delivery";
}

void Parameters::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ArgumentError(std::string("parameter ") + name + " must be strictly positive");
  };
  positive(max_range_km, "max_range_km");
  positive(recharge_time_min, "recharge_time_min");
  positive(shift_limit_min, "shift_limit_min");
  positive(ev_speed_kmh, "ev_speed_kmh");
  positive(bike_speed_kmh, "bike_speed_kmh");
  positive(park_and_unload_min, "park_and_unload_min");
  positive(load_and_exit_min, "load_and_exit_min");
  if (workers < 1) throw ArgumentError("parameter workers must be at least 1");
}

void Instance::validate() const {
  parameters.validate();
  std::set<std::string> seen;
  for (const auto& r : requests) {
    if (r.id.empty()) throw ArgumentError("request with empty id");
    if (!seen.insert(r.id).second) throw ArgumentError("duplicate request id '" + r.id + "'");
    if (!(r.charge >= 0.0 && r.charge <= 1.0))
      throw ArgumentError("request '" + r.id + "': charge must lie in [0,1]");
    if (!(r.time_min >= 0.0) || !std::isfinite(r.time_min))
      throw ArgumentError("request '" + r.id + "': time_min must be non-negative");
    if (r.location.id.empty()) throw ArgumentError("request '" + r.id + "': missing location id");
  }
}

const Request* Instance::find(const std::string& request_id) const {
  auto it = std::find_if(requests.begin(), requests.end(),
                         [&](const Request& r) { return r.id == request_id; });
  return it == requests.end() ? nullptr : &*it;
}

std::size_t Instance::pickup_count() const {
  return static_cast<std::size_t>(
      std::count_if(requests.begin(), requests.end(), [](const Request& r) { return r.is_pickup(); }));
}

std::size_t Instance::delivery_count() const { return requests.size() - pickup_count(); }

std::size_t served_count(const Solution& solution) {
  std::set<std::string> seen;
  for (const auto& route : solution.routes) {
    for (const auto& v : route.visits) {
      if (!seen.insert(v.request_id).second)
        throw StructureError("request '" + v.request_id + "' is visited more than once");
    }
  }
  return seen.size();
}

double minutes_of(double speed_kmh, double distance_km) {
  if (!(speed_kmh > 0.0)) throw ArgumentError("speed must be positive");
  return distance_km / speed_kmh * 60.0;
}

double range_km(double charge, const Parameters& params) { return charge * params.max_range_km; }

double recharge(double charge, double parked_min, const Parameters& params) {
  return std::min(1.0, charge + parked_min / params.recharge_time_min);
}

}  // namespace evrp
