#include "milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evrp {

namespace {

class RowBuilder {
 public:
  RowBuilder& add(std::size_t var, double coef) {
    for (auto& t : terms_) {
      if (t.var == var) {
        t.coef += coef;
        return *this;
      }
    }
    terms_.push_back({var, coef});
    return *this;
  }
  Row finish(int family, std::string name, Sense sense, double rhs) {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    return Row{family, std::move(name), std::move(terms_), sense, rhs};
  }

 private:
  std::vector<Term> terms_;
};

std::string join_name(std::string_view prefix, std::initializer_list<std::size_t> parts) {
  std::string s(prefix);
  for (auto p : parts) {
    s += '_';
    s += std::to_string(p);
  }
  return s;
}

}  // namespace

std::optional<std::size_t> MilpModel::find_variable(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::family_rows(int family) const {
  return static_cast<std::size_t>(
      std::count_if(rows_.begin(), rows_.end(), [&](const Row& r) { return r.family == family; }));
}

MilpModel build_milp(const Instance& instance, const ActionGraph& graph, const ModelOptions& options) {
  const auto& p = instance.parameters;
  if (p.workers < 1) throw ArgumentError("model needs at least one worker");
  if (options.upper_bound_cut && *options.upper_bound_cut < 0)
    throw ArgumentError("upper bound cut must be non-negative");
  if (options.horizon_override && !(*options.horizon_override > 0.0))
    throw ArgumentError("horizon override must be positive");

  MilpModel m;
  const int K = p.workers;
  const auto N = graph.node_count();
  const auto A = graph.arc_count();
  m.workers_ = K;
  m.nodes_ = N;
  m.arcs_ = A;
  m.horizon_ = options.horizon_override.value_or(p.shift_limit_min);
  const double T = m.horizon_;
  const double bigM = options.time_big_m.value_or(T);
  const double L = p.max_range_km;
  const double G = p.recharge_time_min;

  for (std::size_t a = 0; a < A; ++a)
    for (int k = 0; k < K; ++k)
      m.vars_.push_back({join_name("x", {graph.arc(a).from, graph.arc(a).to, static_cast<std::size_t>(k + 1)}),
                         VarType::Binary});
  for (std::size_t i = 0; i < N; ++i)
    for (int k = 0; k < K; ++k)
      m.vars_.push_back({join_name("t", {i, static_cast<std::size_t>(k + 1)}), VarType::Continuous});
  for (std::size_t v = 0; v < m.vars_.size(); ++v) m.by_name_.emplace(m.vars_[v].name, v);

  for (std::size_t i = 0; i < N; ++i) {
    const auto& node = graph.node(i);
    m.node_notes_.push_back(node.kind == NodeKind::Depot
                                ? std::string("depot")
                                : node.id + (node.kind == NodeKind::Pickup ? " (pickup)" : " (delivery)"));
  }

  auto x = [&](std::size_t a, int k) { return m.x_var(a, k); };
  auto t = [&](std::size_t i, int k) { return m.t_var(i, k); };
  auto kk = [](int k) { return static_cast<std::size_t>(k + 1); };

  for (std::size_t a = 0; a < A; ++a)
    if (graph.arc(a).from != ActionGraph::kDepot)
      for (int k = 0; k < K; ++k) m.objective_.push_back({x(a, k), 1.0});
  std::sort(m.objective_.begin(), m.objective_.end(), [](const Term& a, const Term& b) { return a.var < b.var; });

  auto& rows = m.rows_;

  for (int k = 0; k < K; ++k) {
    RowBuilder b;
    for (auto a : graph.out_arcs(ActionGraph::kDepot)) b.add(x(a, k), 1.0);
    rows.push_back(b.finish(2, join_name("c2", {kk(k)}), Sense::LessEqual, 1.0));
  }

  for (std::size_t i = 1; i < N; ++i) {
    RowBuilder b;
    for (int k = 0; k < K; ++k)
      for (auto a : graph.out_arcs(i)) b.add(x(a, k), 1.0);
    rows.push_back(b.finish(3, join_name("c3", {i}), Sense::LessEqual, 1.0));
  }

  for (std::size_t i = 0; i < N; ++i) {
    for (int k = 0; k < K; ++k) {
      RowBuilder b;
      for (auto a : graph.out_arcs(i)) b.add(x(a, k), 1.0);
      for (auto a : graph.in_arcs(i)) b.add(x(a, k), -1.0);
      rows.push_back(b.finish(4, join_name("c4", {i, kk(k)}), Sense::Equal, 0.0));
    }
  }

  for (std::size_t a = 0; a < A; ++a) {
    const auto& arc = graph.arc(a);
    if (arc.to == ActionGraph::kDepot) continue;
    for (int k = 0; k < K; ++k) {
      RowBuilder b;
      b.add(t(arc.from, k), 1.0).add(t(arc.to, k), -1.0).add(x(a, k), arc.op_time_min + bigM);
      rows.push_back(b.finish(5, join_name("c5", {arc.from, arc.to, kk(k)}), Sense::LessEqual, bigM));
    }
  }

  for (auto a : graph.in_arcs(ActionGraph::kDepot)) {
    const auto& arc = graph.arc(a);
    for (int k = 0; k < K; ++k) {
      RowBuilder b;
      b.add(t(arc.from, k), 1.0).add(x(a, k), arc.op_time_min).add(t(ActionGraph::kDepot, k), -1.0);
      rows.push_back(b.finish(6, join_name("c6", {arc.from, kk(k)}), Sense::LessEqual, T));
    }
  }

  if (!options.relax_time_windows) {
    for (std::size_t i = 1; i < N; ++i) {
      if (!graph.is_pickup(i)) continue;
      for (int k = 0; k < K; ++k) {
        RowBuilder b;
        b.add(t(i, k), 1.0);
        rows.push_back(b.finish(7, join_name("c7", {i, kk(k)}), Sense::GreaterEqual, graph.node(i).tau));
      }
    }
    for (std::size_t j = 1; j < N; ++j) {
      if (!graph.is_delivery(j)) continue;
      for (int k = 0; k < K; ++k) {
        RowBuilder b;
        b.add(t(j, k), 1.0);
        rows.push_back(b.finish(8, join_name("c8", {j, kk(k)}), Sense::LessEqual, graph.node(j).tau));
      }
    }
  }

  for (int family : {9, 10, 11}) {
    for (std::size_t a = 0; a < A; ++a) {
      const auto& arc = graph.arc(a);
      if (arc.kind != ArcKind::EV) continue;
      const auto& pi = graph.node(arc.from);
      const auto& dj = graph.node(arc.to);
      const double d = arc.distance_km;
      for (int k = 0; k < K; ++k) {
        RowBuilder b;
        auto name = join_name("c" + std::to_string(family), {arc.from, arc.to, kk(k)});
        if (family == 9) {
          b.add(x(a, k), d).add(t(arc.from, k), -L / G);
          rows.push_back(b.finish(9, name, Sense::LessEqual, L * pi.rho - L * pi.tau / G));
        } else if (family == 10) {
          b.add(t(arc.from, k), 1.0 / G).add(t(arc.to, k), -1.0 / G).add(x(a, k), -(d / L + dj.rho + 1.0));
          rows.push_back(b.finish(10, name, Sense::GreaterEqual, -1.0 - pi.rho + (pi.tau - dj.tau) / G));
        } else {
          b.add(x(a, k), -(d / L + dj.rho + 1.0)).add(t(arc.to, k), -1.0 / G);
          rows.push_back(b.finish(11, name, Sense::GreaterEqual, -2.0 - dj.tau / G));
        }
      }
    }
  }

  if (options.symmetry_breaking) {
    for (int k1 = 0; k1 < K; ++k1) {
      for (int k2 = k1 + 1; k2 < K; ++k2) {
        RowBuilder b;
        for (std::size_t a = 0; a < A; ++a) {
          const auto& arc = graph.arc(a);
          if (arc.from == ActionGraph::kDepot) continue;
          b.add(x(a, k1), arc.op_time_min).add(x(a, k2), -arc.op_time_min);
        }
        rows.push_back(b.finish(14, join_name("c14", {kk(k1), kk(k2)}), Sense::GreaterEqual, 0.0));
      }
    }
  }

  if (options.upper_bound_cut) {
    RowBuilder b;
    for (const auto& term : m.objective_) b.add(term.var, 1.0);
    rows.push_back(b.finish(15, "c15", Sense::LessEqual, static_cast<double>(*options.upper_bound_cut)));
  }
  return m;
}

std::vector<RowViolation> evaluate_rows(const MilpModel& model, std::span<const double> values, double tol) {
  if (values.size() != model.variables().size()) throw ArgumentError("assignment size does not match the model");
  std::vector<RowViolation> out;
  const auto& rows = model.rows();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double lhs = 0.0;
    for (const auto& term : rows[r].terms) lhs += term.coef * values[term.var];
    double slack = 0.0;
    switch (rows[r].sense) {
      case Sense::LessEqual: slack = rows[r].rhs - lhs; break;
      case Sense::GreaterEqual: slack = lhs - rows[r].rhs; break;
      case Sense::Equal: slack = -std::abs(lhs - rows[r].rhs); break;
    }
    if (slack < -tol) out.push_back({r, slack});
  }
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (model.variables()[v].type == VarType::Continuous && values[v] < -tol)
      out.push_back({rows.size() + v, values[v]});
  }
  return out;
}

std::optional<std::vector<double>> complete_times(const MilpModel& model, std::vector<double> values,
                                                  const std::vector<bool>& pinned) {
  const auto& vars = model.variables();
  if (values.size() != vars.size() || pinned.size() != vars.size())
    throw ArgumentError("assignment size does not match the model");

  // Graph over continuous variables plus a zero node; edge u->v with weight w
  // encodes value[v] - value[u] <= w.
  std::vector<std::size_t> slot(vars.size(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> var_of;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (vars[v].type == VarType::Continuous) {
      slot[v] = var_of.size();
      var_of.push_back(v);
    }
  }
  const std::size_t zero = var_of.size();
  struct Edge {
    std::size_t from, to;
    double w;
  };
  std::vector<Edge> edges;
  auto upper = [&](std::size_t u, std::size_t v, double w) { edges.push_back({v, u, w}); };  // u - v <= w

  for (std::size_t s = 0; s < var_of.size(); ++s) {
    upper(zero, s, 0.0);  // nonnegativity
    if (pinned[var_of[s]]) {
      upper(s, zero, values[var_of[s]]);
      upper(zero, s, -values[var_of[s]]);
    }
  }

  for (const auto& row : model.rows()) {
    double fixed = 0.0;
    std::vector<Term> cont;
    for (const auto& term : row.terms) {
      if (vars[term.var].type == VarType::Binary)
        fixed += term.coef * values[term.var];
      else if (term.coef != 0.0)
        cont.push_back(term);
    }
    double rhs = row.rhs - fixed;
    std::vector<std::pair<std::vector<Term>, double>> forms;  // sum <= rhs
    auto negated = [](std::vector<Term> ts) {
      for (auto& t : ts) t.coef = -t.coef;
      return ts;
    };
    if (row.sense != Sense::GreaterEqual) forms.emplace_back(cont, rhs);
    if (row.sense != Sense::LessEqual) forms.emplace_back(negated(cont), -rhs);

    for (auto& [ts, r] : forms) {
      if (ts.empty()) {
        if (r < -1e-9) return std::nullopt;
      } else if (ts.size() == 1) {
        auto s = slot[ts[0].var];
        if (ts[0].coef > 0)
          upper(s, zero, r / ts[0].coef);
        else
          upper(zero, s, -r / ts[0].coef);
      } else if (ts.size() == 2 && std::abs(ts[0].coef + ts[1].coef) <= 1e-12 * std::abs(ts[0].coef)) {
        const auto& pos = ts[0].coef > 0 ? ts[0] : ts[1];
        const auto& neg = ts[0].coef > 0 ? ts[1] : ts[0];
        upper(slot[pos.var], slot[neg.var], r / pos.coef);
      } else {
        throw ArgumentError("row " + row.name + " is not a difference constraint once binaries are fixed");
      }
    }
  }

  const std::size_t n = var_of.size() + 1;
  std::vector<double> dist(n, 0.0);
  bool changed = true;
  for (std::size_t pass = 0; pass <= n && changed; ++pass) {
    changed = false;
    for (const auto& e : edges) {
      if (dist[e.from] + e.w < dist[e.to] - 1e-9) {
        dist[e.to] = dist[e.from] + e.w;
        changed = true;
      }
    }
    if (changed && pass == n) return std::nullopt;
  }
  if (changed) return std::nullopt;

  for (std::size_t s = 0; s < var_of.size(); ++s) {
    auto v = var_of[s];
    if (!pinned[v]) values[v] = dist[s] - dist[zero];
  }
  return values;
}

std::optional<std::vector<double>> assignment_from_solution(const MilpModel& model, const ActionGraph& graph,
                                                            const Solution& solution) {
  std::vector<double> values(model.variables().size(), 0.0);
  std::vector<bool> pinned(values.size(), false);
  for (const auto& route : solution.routes) {
    if (route.worker_index < 0 || route.worker_index >= model.workers())
      throw ArgumentError("route worker index out of range");
    const int k = route.worker_index;
    if (route.visits.empty()) continue;
    std::vector<std::size_t> seq{ActionGraph::kDepot};
    for (const auto& v : route.visits) {
      auto node = graph.node_of(v.request_id);
      if (!node) throw ArgumentError("unknown request '" + v.request_id + "'");
      seq.push_back(*node);
      values[model.t_var(*node, k)] = v.time_min;
      pinned[model.t_var(*node, k)] = true;
    }
    seq.push_back(ActionGraph::kDepot);
    values[model.t_var(ActionGraph::kDepot, k)] = route.depot_departure_min;
    pinned[model.t_var(ActionGraph::kDepot, k)] = true;
    for (std::size_t s = 0; s + 1 < seq.size(); ++s) {
      auto a = graph.arc_index(seq[s], seq[s + 1]);
      if (a == ActionGraph::kNoArc) return std::nullopt;
      values[model.x_var(a, k)] = 1.0;
    }
  }
  return complete_times(model, std::move(values), pinned);
}

Solution assignment_to_solution(const Instance& instance, const ActionGraph& graph,
                                const std::map<std::string, double>& values) {
  const int K = instance.parameters.workers;
  const auto N = graph.node_count();
  auto value_of = [&](const std::string& name) -> std::optional<double> {
    auto it = values.find(name);
    if (it == values.end()) return std::nullopt;
    return it->second;
  };

  Solution sol;
  for (int k = 0; k < K; ++k) {
    const auto kk = std::to_string(k + 1);
    std::vector<std::size_t> succ(N, ActionGraph::kNoArc);
    std::vector<int> indeg(N, 0), outdeg(N, 0);
    std::size_t active = 0;
    for (std::size_t a = 0; a < graph.arc_count(); ++a) {
      const auto& arc = graph.arc(a);
      auto v = value_of("x_" + std::to_string(arc.from) + "_" + std::to_string(arc.to) + "_" + kk).value_or(0.0);
      if (std::abs(v) <= 1e-6) continue;
      if (std::abs(v - 1.0) > 1e-6)
        throw ArgumentError("x_" + std::to_string(arc.from) + "_" + std::to_string(arc.to) + "_" + kk +
                            " is not binary");
      succ[arc.from] = arc.to;
      ++outdeg[arc.from];
      ++indeg[arc.to];
      ++active;
    }
    for (std::size_t i = 0; i < N; ++i) {
      if (outdeg[i] > 1 || outdeg[i] != indeg[i])
        throw ArgumentError("flow conservation violated at node " + std::to_string(i) + " for worker " + kk);
    }
    if (active == 0) continue;
    if (outdeg[ActionGraph::kDepot] == 0)
      throw StructureError("worker " + kk + " has arcs forming a cycle that avoids the depot");

    auto time_of = [&](std::size_t i) {
      auto v = value_of("t_" + std::to_string(i) + "_" + kk);
      if (!v) throw ArgumentError("missing value for t_" + std::to_string(i) + "_" + kk);
      return *v;
    };
    Route route;
    route.worker_index = k;
    route.depot_departure_min = time_of(ActionGraph::kDepot);
    std::size_t cur = ActionGraph::kDepot, used = 0, last = ActionGraph::kDepot;
    do {
      std::size_t next = succ[cur];
      ++used;
      if (next != ActionGraph::kDepot) route.visits.push_back({graph.node(next).id, time_of(next)});
      last = cur;
      cur = next;
    } while (cur != ActionGraph::kDepot && used <= N);
    if (used != active)
      throw StructureError("worker " + kk + " has arcs forming a cycle that avoids the depot");
    route.depot_return_min = (last == ActionGraph::kDepot ? route.depot_departure_min : time_of(last)) +
                             graph.find_arc(last, ActionGraph::kDepot)->op_time_min;
    sol.routes.push_back(std::move(route));
  }
  return sol;
}

}  // namespace evrp
