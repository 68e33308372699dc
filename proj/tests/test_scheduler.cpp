#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "grid_oracle.hpp"
#include "solver.hpp"

using namespace evrp;
using fixture::delivery;
using fixture::pickup;
using Pairs = std::vector<std::pair<std::string, std::string>>;

namespace {

Instance one_leg(double rho_p, double km, double tau_p, double tau_d, double rho_d, Parameters params = {}) {
  return fixture::matrix_instance({"depot", "a", "b"}, {{0, 1, 1}, {1, 0, km}, {1, km, 0}},
                                  {pickup("p", "a", rho_p, tau_p), delivery("d", "b", rho_d, tau_d)}, params);
}

Solution solution_of(const ActionGraph& g, const Pairs& legs, const ScheduleResult& s) {
  std::vector<Leg> seq;
  for (const auto& [p, d] : legs) seq.push_back({*g.node_of(p), *g.node_of(d)});
  Solution sol;
  sol.routes.push_back(to_route(g, seq, s, 0));
  return sol;
}

}  // namespace

TEST_CASE("fully charged EV leaves at once") {
  auto inst = one_leg(1.0, 10, 480, 700, 0.3);
  auto g = fixture::graph_of(inst);
  auto s = schedule_route(g, Pairs{{"p", "d"}});
  REQUIRE(s.feasible);
  CHECK(s.pickup_times[0] == doctest::Approx(480));
  CHECK(s.delivery_times[0] == doctest::Approx(480 + 24 + 2));
  CHECK(s.depot_departure_min == doctest::Approx(476));
  CHECK(s.depot_return_min == doctest::Approx(506 + 4));
  CHECK(check_solution(inst, g, solution_of(g, {{"p", "d"}}, s)).passed());
}

TEST_CASE("waiting for charge") {
  // rho 0.2 and 60 km need 0.4: wait 240 * 0.2 = 48 min.
  auto inst = one_leg(0.2, 60, 480, 900, 0.1);
  auto g = fixture::graph_of(inst);
  auto s = schedule_route(g, Pairs{{"p", "d"}});
  REQUIRE(s.feasible);
  CHECK(s.pickup_times[0] == doctest::Approx(528));
  CHECK(s.charges[0].at_pickup == doctest::Approx(0.4));
  CHECK(s.charges[0].at_delivery == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(check_solution(inst, g, solution_of(g, {{"p", "d"}}, s)).passed());
}

TEST_CASE("half charge covers half the range") {
  auto c = [](double km) { return km / 25.0 * 60.0 + 2.0; };
  for (double eps : {1e-2, 1e-4}) {
    // Zero slack: the EV must leave at its earliest time.
    auto ok = one_leg(0.5, 75 - eps, 480, 480 + c(75 - eps), 0.0);
    auto bad = one_leg(0.5, 75 + eps, 480, 480 + c(75 + eps), 0.0);
    bad.parameters.shift_limit_min = ok.parameters.shift_limit_min = 1000;
    CHECK(schedule_route(fixture::graph_of(ok), Pairs{{"p", "d"}}).feasible);
    auto s = schedule_route(fixture::graph_of(bad), Pairs{{"p", "d"}});
    CHECK_FALSE(s.feasible);
    CHECK_FALSE(s.reason.empty());
  }
}

TEST_CASE("parking an hour adds a quarter") {
  // 15 km takes 38 min; delivered an hour before the deadline.
  auto inst = one_leg(0.5, 15, 480, 480 + 38 + 60, 0.65);
  auto g = fixture::graph_of(inst);
  auto s = schedule_route(g, Pairs{{"p", "d"}});
  REQUIRE(s.feasible);
  CHECK(s.delivery_times[0] == doctest::Approx(518));
  CHECK(s.charges[0].at_deadline - s.charges[0].at_delivery == doctest::Approx(0.25));
  inst.requests[1].charge = 0.66;
  CHECK_FALSE(schedule_route(fixture::graph_of(inst), Pairs{{"p", "d"}}).feasible);
}

TEST_CASE("a later start can shorten the route") {
  // Second pickup opens late: starting later removes the wait.
  auto inst = fixture::matrix_instance(
      {"depot", "a", "b", "c", "e"},
      {{0, 2.5, 5, 2.5, 2.5}, {2.5, 0, 2.5, 5, 5}, {5, 2.5, 0, 2.5, 5}, {2.5, 5, 2.5, 0, 2.5}, {2.5, 5, 5, 2.5, 0}},
      {pickup("p1", "a", 1, 480), delivery("d1", "b", 0, 709), pickup("p2", "c", 1, 720),
       delivery("d2", "e", 0, 800)});
  inst.parameters.shift_limit_min = 50;
  auto g = fixture::graph_of(inst);
  auto s = schedule_route(g, Pairs{{"p1", "d1"}, {"p2", "d2"}});
  REQUIRE(s.feasible);
  CHECK(s.pickup_times[0] == doctest::Approx(701));
  CHECK(s.pickup_times[1] == doctest::Approx(720));
  CHECK(s.duration() == doctest::Approx(10 + 8 + 10 + 1 + 8 + 10));
  CHECK(check_solution(inst, g, solution_of(g, {{"p1", "d1"}, {"p2", "d2"}}, s)).passed());
}

TEST_CASE("missing arcs and bad legs") {
  auto inst = one_leg(1.0, 10, 480, 490, 0.3);
  auto g = fixture::graph_of(inst);
  CHECK_THROWS_AS(schedule_route(g, Pairs{{"p", "d"}}), ArgumentError);
  CHECK_THROWS_AS(schedule_route(g, Pairs{{"d", "p"}}), ArgumentError);
  CHECK_THROWS_AS(schedule_route(g, Pairs{{"p", "zz"}}), ArgumentError);
  CHECK(schedule_route(g, std::vector<Leg>{}).feasible);
}

TEST_CASE("checker rows") {
  auto inst = one_leg(1.0, 10, 480, 600, 0.3);
  auto g = fixture::graph_of(inst);
  auto s = schedule_route(g, Pairs{{"p", "d"}});
  REQUIRE(s.feasible);
  auto sol = solution_of(g, {{"p", "d"}}, s);
  auto rep = check_solution(inst, g, sol);
  CHECK(rep.passed());
  CHECK(rep.count(2) == 1);
  CHECK(rep.count(3) == 2);
  CHECK(rep.count(9) == 1);

  SUBCASE("late delivery") {
    auto late = sol;
    late.routes[0].visits[1].time_min = 601;
    late.routes[0].visits[0].time_min = 601 - 26;
    auto r = check_solution(inst, g, late);
    CHECK_FALSE(r.passed());
    auto it = std::find_if(r.rows.begin(), r.rows.end(), [](const CheckRow& c) { return !c.satisfied; });
    REQUIRE(it != r.rows.end());
    CHECK(it->family == 8);
    CHECK(it->slack == doctest::Approx(-1.0));
    CHECK(r.failures() == 1);
  }
  SUBCASE("request in two routes") {
    auto twice = sol;
    twice.routes.push_back(sol.routes[0]);
    twice.routes[1].worker_index = 1;
    inst.parameters.workers = 2;
    auto r = check_solution(inst, g, twice);
    bool family3 = std::any_of(r.rows.begin(), r.rows.end(), [](const CheckRow& c) {
      return c.family == 3 && !c.satisfied;
    });
    CHECK(family3);
  }
  SUBCASE("unknown request") {
    auto bad = sol;
    bad.routes[0].visits[0].request_id = "nope";
    CHECK_THROWS_AS(check_solution(inst, g, bad), ArgumentError);
  }
  SUBCASE("JSON report") {
    auto j = rep.to_json();
    CHECK(j["passed"] == true);
    CHECK(j["rows"].size() == rep.rows.size());
  }
}

TEST_CASE("scheduler agrees with the grid search") {
  std::mt19937_64 rng(11);
  int feasible = 0, total = 0;
  for (int i = 0; i < 150; ++i) {
    auto c = grid::random_case(rng, 1 + i % 2);
    auto [inst, legs] = grid::to_instance(c);
    auto g = fixture::graph_of(inst);
    auto s = schedule_route(g, legs);
    const bool want = grid::feasible(c);
    CAPTURE(i);
    CHECK(s.feasible == want);
    if (s.feasible) {
      ++feasible;
      CHECK(check_solution(inst, g, solution_of(g, legs, s)).passed());
    }
    ++total;
  }
  MESSAGE(feasible << " of " << total << " routes feasible");
  CHECK(feasible > 10);
  CHECK(feasible < total - 10);
}
