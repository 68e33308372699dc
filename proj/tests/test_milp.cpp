#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "fixtures.hpp"
#include "milp.hpp"
#include "solver.hpp"

using namespace evrp;
using fixture::delivery;
using fixture::pickup;

namespace {

// Depot, one delivery and one pickup with all four possible arcs.
ActionGraph four_arc_graph() {
  Parameters p;
  std::vector<GraphNode> nodes{{NodeKind::Depot, "depot", "depot", 0, 0},
                               {NodeKind::Delivery, "d", "b", 500, 0.1},
                               {NodeKind::Pickup, "p", "a", 480, 1}};
  std::vector<Arc> arcs{{0, 2, ArcKind::Bike, 1, 4}, {2, 1, ArcKind::EV, 1, 4.4}, {1, 2, ArcKind::Bike, 1, 4},
                        {1, 0, ArcKind::Bike, 1, 4}};
  return ActionGraph(p, nodes, arcs, {});
}

Instance two_pair_instance(int workers) {
  Parameters p;
  p.workers = workers;
  auto inst = fixture::matrix_instance(
      {"depot", "a", "b", "c", "e"},
      {{0, 2, 3, 2, 3}, {2, 0, 4, 3, 5}, {3, 4, 0, 5, 3}, {2, 3, 5, 0, 4}, {3, 5, 3, 4, 0}},
      {pickup("p1", "a", 0.8, 480), delivery("d1", "b", 0.3, 560), pickup("p2", "c", 0.9, 500),
       delivery("d2", "e", 0.2, 600)},
      p);
  return inst;
}

struct Counts {
  std::size_t arcs_in_depot = 0, arcs_not_in_depot = 0, ev = 0, depot_out = 0;
};

Counts count_arcs(const ActionGraph& g) {
  Counts c;
  for (const auto& a : g.arcs()) {
    if (a.to == ActionGraph::kDepot)
      ++c.arcs_in_depot;
    else
      ++c.arcs_not_in_depot;
    if (a.kind == ArcKind::EV) ++c.ev;
    if (a.from == ActionGraph::kDepot) ++c.depot_out;
  }
  return c;
}

}  // namespace

TEST_CASE("three node model counts") {
  auto inst = fixture::matrix_instance({"depot", "a", "b"}, {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}},
                                       {pickup("p", "a", 1, 480), delivery("d", "b", 0.1, 500)});
  auto g = four_arc_graph();
  auto m = build_milp(inst, g);
  std::size_t bin = 0, cont = 0;
  for (const auto& v : m.variables()) (v.type == VarType::Binary ? bin : cont)++;
  CHECK(bin == 4);
  CHECK(cont == 3);
  CHECK(m.family_rows(3) == 2);
  CHECK(m.family_rows(2) == 1);
  CHECK(m.find_variable("x_2_1_1").has_value());
  CHECK(m.find_variable("t_0_1").has_value());

  inst.parameters.workers = 2;
  ModelOptions o;
  o.symmetry_breaking = true;
  CHECK(build_milp(inst, g, o).family_rows(14) == 1);
  inst.parameters.workers = 0;
  CHECK_THROWS_AS(build_milp(inst, g), ArgumentError);
}

TEST_CASE("row counts match quantifier counts") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig cfg;
    cfg.size = 2 * (1 + seed % 6);
    cfg.seed = seed;
    auto inst = generate_instance(cfg);
    const int K = 1 + static_cast<int>(seed % 3);
    inst.parameters.workers = K;
    auto g = fixture::graph_of(inst);
    auto c = count_arcs(g);
    ModelOptions o;
    o.symmetry_breaking = seed % 2 == 0;
    if (seed % 4 == 0) o.upper_bound_cut = static_cast<int>(seed);
    auto m = build_milp(inst, g, o);
    const std::size_t N = g.node_count(), P = g.pickup_count(), D = g.delivery_count(), k = K;
    CAPTURE(seed);
    CHECK(m.variables().size() == g.arc_count() * k + N * k);
    CHECK(m.objective().size() == (g.arc_count() - c.depot_out) * k);
    CHECK(m.family_rows(2) == k);
    CHECK(m.family_rows(3) == P + D);
    CHECK(m.family_rows(4) == N * k);
    CHECK(m.family_rows(5) == c.arcs_not_in_depot * k);
    CHECK(m.family_rows(6) == c.arcs_in_depot * k);
    CHECK(m.family_rows(7) == P * k);
    CHECK(m.family_rows(8) == D * k);
    CHECK(m.family_rows(9) == c.ev * k);
    CHECK(m.family_rows(10) == c.ev * k);
    CHECK(m.family_rows(11) == c.ev * k);
    CHECK(m.family_rows(14) == (o.symmetry_breaking ? k * (k - 1) / 2 : 0));
    CHECK(m.family_rows(15) == (o.upper_bound_cut ? 1u : 0u));
    CHECK(m.rows().size() == k + (P + D) + N * k + g.arc_count() * k + (P + D) * k + 3 * c.ev * k +
                                 m.family_rows(14) + m.family_rows(15));

    ModelOptions relaxed;
    relaxed.relax_time_windows = true;
    relaxed.horizon_override = K * inst.parameters.shift_limit_min;
    auto r = build_milp(inst, g, relaxed);
    CHECK(r.family_rows(7) == 0);
    CHECK(r.family_rows(8) == 0);
    CHECK(r.horizon() == doctest::Approx(K * 300.0));
  }
}

TEST_CASE("LP export is stable and round-trips") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GeneratorConfig cfg;
    cfg.size = 8;
    cfg.seed = seed;
    auto inst = generate_instance(cfg);
    inst.parameters.workers = 2;
    ModelOptions o;
    o.symmetry_breaking = true;
    o.upper_bound_cut = 5;
    auto a = export_lp(build_milp(inst, fixture::graph_of(inst), o));
    auto model = build_milp(inst, fixture::graph_of(inst), o);
    auto b = export_lp(model);
    CHECK(a == b);
    auto parsed = parse_lp(b);
    auto canon = canonical_lp(model);
    CHECK(parsed.maximize);
    CHECK(parsed.objective == canon.objective);
    CHECK(parsed.binaries == canon.binaries);
    REQUIRE(parsed.rows.size() == canon.rows.size());
    for (std::size_t r = 0; r < canon.rows.size(); ++r) {
      CAPTURE(canon.rows[r].name);
      CHECK(parsed.rows[r] == canon.rows[r]);
    }
    CHECK(b.rfind("\\", 0) == 0);
    CHECK(b.find("Maximize\n obj:") != std::string::npos);
    CHECK(b.find(" c15:") != std::string::npos);
  }
}

TEST_CASE("served cap row") {
  auto inst = two_pair_instance(1);
  ModelOptions o;
  o.upper_bound_cut = 5;
  auto m = build_milp(inst, fixture::graph_of(inst), o);
  REQUIRE(m.family_rows(15) == 1);
  auto it = std::find_if(m.rows().begin(), m.rows().end(), [](const Row& r) { return r.family == 15; });
  CHECK(it->rhs == 5.0);
  CHECK(it->sense == Sense::LessEqual);
  o.upper_bound_cut = -1;
  CHECK_THROWS_AS(build_milp(inst, fixture::graph_of(inst), o), ArgumentError);
}

TEST_CASE("LP reader") {
  auto lp = parse_lp(
      "\\ comment\nMaximize\n obj: x + 2 y\nSubject To\n c1: x + y <= 1\n c2: -3.5 x\n  + y >= -2\n"
      "c3: 0 x = 0\nBounds\n y >= 0\nBinaries\n x\nEnd\n");
  CHECK(lp.objective.at("y") == 2.0);
  REQUIRE(lp.rows.size() == 3);
  CHECK(lp.rows[1].terms.at("x") == -3.5);
  CHECK(lp.rows[1].rhs == -2.0);
  CHECK(lp.rows[2].terms.empty());
  CHECK(lp.binaries == std::vector<std::string>{"x"});
  CHECK_THROWS_AS(parse_lp("Subject To\n c1: x <= 1\n"), ParseError);
  CHECK_THROWS_AS(parse_lp("Maximize\n obj: x\nSubject To\n c1: x + y 1\n"), ParseError);
}

TEST_CASE("assignment to solution") {
  auto inst = two_pair_instance(2);
  auto g = fixture::graph_of(inst);
  auto m = build_milp(inst, g);

  SUBCASE("all zero") {
    std::map<std::string, double> none;
    CHECK(assignment_to_solution(inst, g, none).routes.empty());
  }
  SUBCASE("two depot cycles") {
    auto s1 = schedule_route(g, std::vector<std::pair<std::string, std::string>>{{"p1", "d1"}});
    auto s2 = schedule_route(g, std::vector<std::pair<std::string, std::string>>{{"p2", "d2"}});
    REQUIRE(s1.feasible);
    REQUIRE(s2.feasible);
    Solution sol;
    std::vector<Leg> l1{{*g.node_of("p1"), *g.node_of("d1")}}, l2{{*g.node_of("p2"), *g.node_of("d2")}};
    sol.routes.push_back(to_route(g, l1, s1, 0));
    sol.routes.push_back(to_route(g, l2, s2, 1));
    auto values = assignment_from_solution(m, g, sol);
    REQUIRE(values);
    auto text = format_assignment(m, *values);
    auto back = assignment_to_solution(inst, g, parse_assignment(text));
    REQUIRE(back.routes.size() == 2);
    CHECK(back.routes[0].visits[0].request_id == "p1");
    CHECK(back.routes[1].visits[1].request_id == "d2");
    CHECK(check_solution(inst, g, back).passed());
    CHECK(back.routes[0].depot_return_min == doctest::Approx(s1.depot_return_min));
  }
  SUBCASE("single route") {
    auto p = *g.node_of("p1"), d = *g.node_of("d1");
    std::map<std::string, double> v{{"x_0_" + std::to_string(p) + "_1", 1},
                                    {"x_" + std::to_string(p) + "_" + std::to_string(d) + "_1", 1},
                                    {"x_" + std::to_string(d) + "_0_1", 1},
                                    {"t_0_1", 460},
                                    {"t_" + std::to_string(p) + "_1", 480},
                                    {"t_" + std::to_string(d) + "_1", 492}};
    auto sol = assignment_to_solution(inst, g, v);
    REQUIRE(sol.routes.size() == 1);
    CHECK(sol.routes[0].visits.size() == 2);
    v["x_0_" + std::to_string(p) + "_1"] = 0.5;
    CHECK_THROWS_AS(assignment_to_solution(inst, g, v), ArgumentError);
    v["x_0_" + std::to_string(p) + "_1"] = 0;
    CHECK_THROWS_AS(assignment_to_solution(inst, g, v), ArgumentError);
  }
}

TEST_CASE("solver routes satisfy the verbatim model") {
  int mismatches_at_horizon = 0, routes = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto inst = fixture::oracle_instance(seed);
    inst.parameters.workers = 1 + seed % 2;
    auto g = fixture::graph_of(inst);
    auto res = solve_branch_and_bound(inst, g, {}, inst.parameters.workers);
    if (res.solution.routes.empty()) continue;
    ++routes;
    ModelOptions loose;
    loose.time_big_m = 1e5;
    auto m = build_milp(inst, g, loose);
    auto values = assignment_from_solution(m, g, res.solution);
    CAPTURE(seed);
    REQUIRE(values);
    auto bad = evaluate_rows(m, *values, 1e-6);
    if (!bad.empty()) MESSAGE("row " << m.rows()[bad[0].row].name << " slack " << bad[0].slack);
    CHECK(bad.empty());
    CHECK(res.objective == static_cast<int>(
                               std::count_if(m.objective().begin(), m.objective().end(),
                                             [&](const Term& t) { return (*values)[t.var] > 0.5; })));
    if (!assignment_from_solution(build_milp(inst, g), g, res.solution)) ++mismatches_at_horizon;
  }
  MESSAGE(routes << " solutions; " << mismatches_at_horizon << " not representable with big-M = T");
  CHECK(routes > 10);
}
