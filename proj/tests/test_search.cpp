#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"
#include "solver.hpp"

using namespace evrp;
using fixture::delivery;
using fixture::pickup;

namespace {

std::vector<std::vector<double>> uniform_km(std::size_t n, double km) {
  std::vector<std::vector<double>> m(n, std::vector<double>(n, km));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0;
  return m;
}

Instance chain_instance() {
  // Only p1 d1 p2 d2 serves all four requests.
  return fixture::matrix_instance({"depot", "a", "b", "c", "e"}, uniform_km(5, 2.5),
                                  {pickup("p1", "a", 1, 480), delivery("d1", "b", 0, 490), pickup("p2", "c", 1, 502),
                                   delivery("d2", "e", 0, 512)});
}

}  // namespace

TEST_CASE("nothing servable") {
  auto inst = fixture::matrix_instance({"depot", "a", "b"}, uniform_km(3, 5),
                                       {pickup("p", "a", 1, 600), delivery("d", "b", 0, 500)});
  auto g = fixture::graph_of(inst);
  auto r = solve_branch_and_bound(inst, g, {}, 2);
  CHECK(r.objective == 0);
  CHECK(r.optimal);
  CHECK(r.solution.routes.empty());
  CHECK(objective_of(brute_force(inst, g, 2)) == 0);
  CHECK(compute_upper_bound(inst, g, 2).value == 0);
}

TEST_CASE("one pair, three workers") {
  auto inst = fixture::matrix_instance({"depot", "a", "b"}, uniform_km(3, 5),
                                       {pickup("p", "a", 1, 480), delivery("d", "b", 0, 600)});
  inst.parameters.workers = 3;
  auto g = fixture::graph_of(inst);
  auto r = solve_branch_and_bound(inst, g, {}, 3);
  CHECK(r.objective == 2);
  CHECK(r.optimal);
  CHECK(r.solution.routes.size() == 1);
  CHECK(check_solution(inst, g, r.solution).passed());
  for (int k = 1; k <= 3; ++k) CHECK(compute_upper_bound(inst, g, k).value == 2);
  CHECK(objective_of(brute_force(inst, g, 1)) == 2);
}

TEST_CASE("empty instance") {
  auto inst = fixture::matrix_instance({"depot"}, {{0}}, {});
  auto g = fixture::graph_of(inst);
  CHECK(objective_of(brute_force(inst, g, 1)) == 0);
  CHECK(solve_branch_and_bound(inst, g, {}, 1).objective == 0);
  CHECK(heuristic_sequential(inst, g, 2).objective == 0);
}

TEST_CASE("single full ordering") {
  auto inst = chain_instance();
  auto g = fixture::graph_of(inst);
  auto bf = brute_force(inst, g, 1);
  CHECK(objective_of(bf) == 4);
  REQUIRE(bf.routes.size() == 1);
  std::vector<std::string> order;
  for (const auto& v : bf.routes[0].visits) order.push_back(v.request_id);
  CHECK(order == std::vector<std::string>{"p1", "d1", "p2", "d2"});
  auto r = solve_branch_and_bound(inst, g, {}, 1);
  CHECK(r.objective == 4);
  CHECK(check_solution(inst, g, r.solution).passed());
}

TEST_CASE("brute force size guard") {
  GeneratorConfig cfg;
  cfg.size = 12;
  auto inst = generate_instance(cfg);
  auto g = fixture::graph_of(inst);
  CHECK_THROWS_AS(brute_force(inst, g, 1), LimitError);
  CHECK_THROWS_AS(solve_branch_and_bound(inst, g, {}, 0), ArgumentError);
}

TEST_CASE("oracle agreement and bounds") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto inst = fixture::oracle_instance(seed);
    auto g = fixture::graph_of(inst);
    int previous = -1;
    for (int K = 1; K <= 2; ++K) {
      inst.parameters.workers = K;
      CAPTURE(seed);
      CAPTURE(K);
      auto exact = solve_branch_and_bound(inst, g, {}, K);
      auto bf = brute_force(inst, g, K);
      auto heur = heuristic_sequential(inst, g, K);
      auto ub = compute_upper_bound(inst, g, K);
      CHECK(exact.optimal);
      CHECK(exact.objective == objective_of(bf));
      CHECK(heur.objective <= exact.objective);
      CHECK(exact.objective <= ub.value);
      CHECK(exact.objective >= previous);
      previous = exact.objective;
      CHECK(check_solution(inst, g, exact.solution).passed());
      CHECK(check_solution(inst, g, bf).passed());
      CHECK(check_solution(inst, g, heur.solution).passed());
    }
  }
}

TEST_CASE("speed-ups keep the optimum") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    GeneratorConfig cfg;
    cfg.size = 12;
    cfg.seed = seed;
    auto inst = generate_instance(cfg);
    auto g = fixture::graph_of(inst);
    for (int K = 1; K <= 3; ++K) {
      inst.parameters.workers = K;
      auto base = solve_branch_and_bound(inst, g, {}, K);
      SolveOptions all;
      all.symmetry_breaking = all.use_upper_bound = all.use_warm_start = true;
      auto fast = solve_branch_and_bound(inst, g, all, K);
      CAPTURE(seed);
      CHECK(base.optimal);
      CHECK(fast.optimal);
      CHECK(fast.objective == base.objective);
      CHECK(check_solution(inst, g, fast.solution).passed());
      REQUIRE(fast.stats.upper_bound);
      CHECK(*fast.stats.upper_bound >= base.objective);
      CHECK(fast.stats.warm_start_value <= base.objective);

      SolveOptions parallel;
      parallel.deterministic = false;
      parallel.threads = 3;
      auto par = solve_branch_and_bound(inst, g, parallel, K);
      CHECK(par.objective == base.objective);
      CHECK(check_solution(inst, g, par.solution).passed());
    }
  }
}

TEST_CASE("deterministic mode repeats the same routes") {
  GeneratorConfig cfg;
  cfg.size = 16;
  cfg.seed = 4;
  auto inst = generate_instance(cfg);
  inst.parameters.workers = 2;
  auto g = fixture::graph_of(inst);
  auto a = solve_branch_and_bound(inst, g, {}, 2);
  auto b = solve_branch_and_bound(inst, g, {}, 2);
  REQUIRE(a.solution.routes.size() == b.solution.routes.size());
  for (std::size_t r = 0; r < a.solution.routes.size(); ++r) {
    REQUIRE(a.solution.routes[r].visits.size() == b.solution.routes[r].visits.size());
    for (std::size_t v = 0; v < a.solution.routes[r].visits.size(); ++v) {
      CHECK(a.solution.routes[r].visits[v].request_id == b.solution.routes[r].visits[v].request_id);
      CHECK(a.solution.routes[r].visits[v].time_min == b.solution.routes[r].visits[v].time_min);
    }
  }
}

TEST_CASE("limits stop the search") {
  GeneratorConfig cfg;
  cfg.size = 20;
  cfg.seed = 2;
  auto inst = generate_instance(cfg);
  inst.parameters.workers = 3;
  auto g = fixture::graph_of(inst);
  SolveOptions o;
  o.node_limit = 50;
  auto r = solve_branch_and_bound(inst, g, o, 3);
  CHECK_FALSE(r.optimal);
  CHECK(check_solution(inst, g, r.solution).passed());
  o.node_limit = 0;
  CHECK_THROWS_AS(solve_branch_and_bound(inst, g, o, 3), ArgumentError);
}

TEST_CASE("heuristic details") {
  auto inst = chain_instance();
  auto g = fixture::graph_of(inst);
  auto one = heuristic_sequential(inst, g, 1);
  CHECK(one.objective == solve_branch_and_bound(inst, g, {}, 1).objective);
  auto three = heuristic_sequential(inst, g, 3);
  CHECK(three.solution.routes.size() == 1);
  CHECK(three.objective == 4);
}

TEST_CASE("symmetry breaking orders routes by cost") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorConfig cfg;
    cfg.size = 14;
    cfg.seed = seed;
    auto inst = generate_instance(cfg);
    inst.parameters.workers = 3;
    auto g = fixture::graph_of(inst);
    SolveOptions o;
    o.symmetry_breaking = true;
    auto r = solve_branch_and_bound(inst, g, o, 3);
    std::vector<double> cost;
    for (const auto& route : r.solution.routes) {
      double c = 0;
      for (std::size_t v = 0; v + 1 < route.visits.size(); ++v)
        c += g.find_arc(*g.node_of(route.visits[v].request_id), *g.node_of(route.visits[v + 1].request_id))
                 ->op_time_min;
      c += g.find_arc(*g.node_of(route.visits.back().request_id), 0)->op_time_min;
      cost.push_back(c);
    }
    for (std::size_t i = 1; i < cost.size(); ++i) CHECK(cost[i] <= cost[i - 1] + 1e-9);
  }
}

TEST_CASE("bound covers routes that cannot be chained") {
  // Same windows on both pairs: no bike arc links them, yet two workers serve both.
  auto inst = fixture::matrix_instance(
      {"depot", "a", "b", "c", "e"},
      {{0, 2, 2, 2, 2}, {2, 0, 5, 9, 9}, {2, 5, 0, 9, 9}, {2, 9, 9, 0, 5}, {2, 9, 9, 5, 0}},
      {pickup("p1", "a", 1, 480), delivery("d1", "b", 0, 520), pickup("p2", "c", 1, 480),
       delivery("d2", "e", 0, 520)});
  inst.parameters.workers = 2;
  auto g = fixture::graph_of(inst);
  CHECK_FALSE(g.has_arc(*g.node_of("d1"), *g.node_of("p2")));
  CHECK_FALSE(g.has_arc(*g.node_of("d2"), *g.node_of("p1")));
  CHECK(solve_branch_and_bound(inst, g, {}, 2).objective == 4);
  CHECK(compute_upper_bound(inst, g, 2).value >= 4);
  CHECK(compute_upper_bound(inst, g, 1).value >= 2);
}
