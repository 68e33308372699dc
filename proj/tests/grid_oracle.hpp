#pragma once
// Exhaustive search over whole-minute service times for 1- and 2-leg routes.
//
// Data is integral in the right units: every distance is 1.25 * n km, so an
// EV drive takes 3n min (+2 handling), a bike ride 5n min, and the charge it
// uses equals 2n minutes of recharging. Charges are r/240. All constraints
// are then differences of times with integer constants, so a feasible real
// schedule implies a feasible whole-minute one and the grid is exact.

#include <algorithm>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace grid {

using namespace evrp;

struct Leg {
  int tau_p = 0, tau_d = 0;  // minutes
  int rho_p = 0, rho_d = 0;  // charge in minutes of recharge, 0..240
  int n_ev = 0;              // EV distance in 1.25 km steps
};

struct Case {
  std::vector<Leg> legs;
  int n_out = 0;                // depot -> first pickup
  std::vector<int> n_between;   // delivery l -> pickup l+1
  int n_back = 0;               // last delivery -> depot
  int shift = 300;              // T
};

inline int ev_min(int n) { return 3 * n + 2; }
inline int bike_min(int n) { return 5 * n; }

// Whether the route's arcs exist under the graph rules.
inline bool arcs_exist(const Case& c) {
  for (std::size_t l = 0; l < c.legs.size(); ++l) {
    const auto& g = c.legs[l];
    if (g.tau_d < g.tau_p + ev_min(g.n_ev)) return false;
    if (l + 1 < c.legs.size() && c.legs[l + 1].tau_p < g.tau_d + bike_min(c.n_between[l]) + 1) return false;
  }
  return true;
}

inline Case random_case(std::mt19937_64& rng, int legs) {
  auto uni = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int shifts[] = {60, 90, 120, 300};
  for (;;) {
    Case c;
    c.shift = shifts[uni(0, 3)];
    c.n_out = uni(1, 6);
    c.n_back = uni(1, 6);
    for (int l = 0; l < legs; ++l) {
      Leg g;
      g.n_ev = uni(1, 20);
      g.tau_p = uni(480, 600);
      g.tau_d = uni(g.tau_p, 600);
      g.rho_p = uni(0, 240);
      g.rho_d = uni(0, 240);
      c.legs.push_back(g);
      if (l + 1 < legs) c.n_between.push_back(uni(1, 6));
    }
    if (arcs_exist(c)) return c;
  }
}

// Physical reading: the battery holds at most a full charge, a parked EV
// gains 1/240 per minute, driving uses distance / L.
inline bool feasible(const Case& c) {
  const auto m = c.legs.size();
  std::vector<int> tp(m), td(m);
  auto search = [&](auto&& self, std::size_t l, int ready) -> bool {
    if (l == m) {
      const int t0 = tp[0] - bike_min(c.n_out);
      return t0 >= 0 && td[m - 1] + bike_min(c.n_back) - t0 <= c.shift;
    }
    const auto& g = c.legs[l];
    for (int p = std::max(g.tau_p, ready); p <= 600; ++p) {
      const int charge = std::min(240, g.rho_p + (p - g.tau_p));
      if (charge < 2 * g.n_ev) continue;
      for (int d = p + ev_min(g.n_ev); d <= g.tau_d; ++d) {
        const int at_deadline = std::min(240, charge - 2 * g.n_ev + (g.tau_d - d));
        if (at_deadline < g.rho_d) continue;
        tp[l] = p;
        td[l] = d;
        const int next = l + 1 < m ? d + bike_min(c.n_between[l]) : 0;
        if (self(self, l + 1, next)) return true;
      }
    }
    return false;
  };
  return search(search, 0, 0);
}

// The same route as an instance plus the leg list, with distinct locations.
inline std::pair<Instance, std::vector<std::pair<std::string, std::string>>> to_instance(const Case& c) {
  const auto m = c.legs.size();
  std::vector<std::string> labels{"depot"};
  for (std::size_t l = 0; l < m; ++l) {
    labels.push_back("a" + std::to_string(l));
    labels.push_back("b" + std::to_string(l));
  }
  const auto n = labels.size();
  // Unused pairs get a distance too; they play no role in the route.
  std::vector<std::vector<double>> km(n, std::vector<double>(n, 1.25 * 40));
  auto set = [&](std::size_t i, std::size_t j, int steps) { km[i][j] = km[j][i] = 1.25 * steps; };
  for (std::size_t i = 0; i < n; ++i) km[i][i] = 0;
  set(0, 1, c.n_out);
  set(2 * m, 0, c.n_back);
  for (std::size_t l = 0; l < m; ++l) {
    set(1 + 2 * l, 2 + 2 * l, c.legs[l].n_ev);
    if (l + 1 < m) set(2 + 2 * l, 3 + 2 * l, c.n_between[l]);
  }
  std::vector<Request> reqs;
  std::vector<std::pair<std::string, std::string>> legs;
  for (std::size_t l = 0; l < m; ++l) {
    const auto& g = c.legs[l];
    auto pid = "p" + std::to_string(l), did = "d" + std::to_string(l);
    reqs.push_back(fixture::pickup(pid, labels[1 + 2 * l], g.rho_p / 240.0, g.tau_p));
    reqs.push_back(fixture::delivery(did, labels[2 + 2 * l], g.rho_d / 240.0, g.tau_d));
    legs.push_back({pid, did});
  }
  Parameters p;
  p.shift_limit_min = c.shift;
  return {fixture::matrix_instance(labels, km, reqs, p), legs};
}

}  // namespace grid
