#pragma once
// Small builders shared by the test programs.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "action_graph.hpp"
#include "bench.hpp"
#include "distance.hpp"
#include "domain.hpp"

namespace fixture {

using namespace evrp;

inline Request pickup(const std::string& id, const std::string& loc, double rho, double tau) {
  return Request{id, RequestKind::Pickup, Location{loc, {}, {}}, rho, tau};
}

inline Request delivery(const std::string& id, const std::string& loc, double rho, double tau) {
  return Request{id, RequestKind::Delivery, Location{loc, {}, {}}, rho, tau};
}

// Instance over an explicit symmetric distance table between named locations;
// "depot" must be one of them.
inline Instance matrix_instance(std::vector<std::string> labels, std::vector<std::vector<double>> km,
                                std::vector<Request> requests, Parameters params = {}) {
  Instance inst;
  inst.name = "fixture";
  inst.parameters = params;
  inst.depot = Location{"depot", {}, {}};
  inst.requests = std::move(requests);
  inst.distance_source = MatrixSource{std::move(labels), std::move(km), {}};
  return inst;
}

inline ActionGraph graph_of(const Instance& inst) { return build_graph(inst, build_distances(inst)); }

// Random small instance for oracle comparisons: 1..4 pairs on the default
// stations with a randomly sized window and shift limit so that both loose
// and binding cases show up.
inline Instance oracle_instance(std::uint64_t seed, int max_pairs = 4) {
  std::mt19937_64 rng(seed * 7919 + 17);
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.size = 2 * std::uniform_int_distribution<int>(1, max_pairs)(rng);
  const double widths[] = {60.0, 120.0, 240.0, 420.0};
  cfg.window_close_min = cfg.window_open_min + widths[std::uniform_int_distribution<int>(0, 3)(rng)];
  const double shifts[] = {60.0, 120.0, 300.0};
  cfg.parameters.shift_limit_min = shifts[std::uniform_int_distribution<int>(0, 2)(rng)];
  auto inst = generate_instance(cfg);
  inst.name = "oracle" + std::to_string(seed);
  // Even seeds: each delivery closes shortly after its pickup opens, which
  // gives long chains of compatible legs. Its required charge is a share of
  // the pickup's.
  if (seed % 2 == 0) {
    const std::size_t pairs = inst.requests.size() / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
      const double lag = std::uniform_int_distribution<int>(15, 90)(rng);
      inst.requests[pairs + i].time_min = std::min(inst.requests[i].time_min + lag, 1440.0);
      const double share = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
      inst.requests[pairs + i].charge = std::round(inst.requests[i].charge * share * 100.0) / 100.0;
    }
  }
  return inst;
}

}  // namespace fixture
