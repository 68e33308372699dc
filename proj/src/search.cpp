#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "solver.hpp"

namespace evrp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Maximum bipartite matching between free pickups and free deliveries over
// compatible legs (Kuhn's augmenting paths).
class LegMatcher {
 public:
  LegMatcher(std::size_t nodes, const std::vector<Leg>& legs) : adj_(nodes), match_(nodes), seen_(nodes) {
    for (const auto& l : legs) {
      adj_[l.pickup].push_back(l.delivery);
      if (std::find(pickups_.begin(), pickups_.end(), l.pickup) == pickups_.end()) pickups_.push_back(l.pickup);
    }
  }

  int size(const std::vector<char>& used) {
    std::fill(match_.begin(), match_.end(), kNone);
    int count = 0;
    for (auto p : pickups_) {
      if (used[p]) continue;
      ++stamp_;
      if (augment(p, used)) ++count;
    }
    return count;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  bool augment(std::size_t p, const std::vector<char>& used) {
    for (auto d : adj_[p]) {
      if (used[d] || seen_[d] == stamp_) continue;
      seen_[d] = stamp_;
      if (match_[d] == kNone || augment(match_[d], used)) {
        match_[d] = p;
        return true;
      }
    }
    return false;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> pickups_;
  std::vector<std::size_t> match_;
  std::vector<std::uint64_t> seen_;
  std::uint64_t stamp_ = 0;
};

// Operational cost of a route excluding the depot departure: EV arcs, bike
// connections and the ride back to the depot.
double route_cost(const ActionGraph& g, const std::vector<Leg>& legs, bool include_return) {
  double c = 0.0;
  for (std::size_t l = 0; l < legs.size(); ++l) {
    c += g.find_arc(legs[l].pickup, legs[l].delivery)->op_time_min;
    if (l + 1 < legs.size())
      c += g.find_arc(legs[l].delivery, legs[l + 1].pickup)->op_time_min;
    else if (include_return)
      c += g.find_arc(legs[l].delivery, ActionGraph::kDepot)->op_time_min;
  }
  return c;
}

struct Shared {
  std::atomic<int> best_value{-1};
  std::mutex mutex;
  Solution best;
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> stopped{false};
  Clock::time_point started = Clock::now();
  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit_s;

  void offer(int value, const Solution& s) {
    int cur = best_value.load();
    if (value <= cur) return;
    std::lock_guard lock(mutex);
    if (value > best_value.load()) {
      best = s;
      best_value.store(value);
    }
  }

  bool over_limit() {
    auto n = nodes.fetch_add(1) + 1;
    if (stopped.load(std::memory_order_relaxed)) return true;
    if (node_limit && n > *node_limit) stopped = true;
    if (time_limit_s && (n & 255) == 0 && seconds_since(started) > *time_limit_s) stopped = true;
    return stopped.load(std::memory_order_relaxed);
  }
};

class ExactSearch {
 public:
  ExactSearch(const ActionGraph& g, int workers, bool symmetry, std::optional<int> cap, Shared& shared,
              const std::vector<char>& excluded)
      : g_(g),
        K_(workers),
        symmetry_(symmetry),
        cap_(cap),
        shared_(shared),
        used_(excluded),
        legs_(compatible_legs(g)),
        matcher_(g.node_count(), legs_) {
    by_pickup_.resize(g.node_count());
    for (const auto& l : legs_) by_pickup_[l.pickup].push_back(l.delivery);
    for (auto& v : by_pickup_) std::sort(v.begin(), v.end());
  }

  // Candidate first legs of the first route, in expansion order.
  std::vector<Leg> first_legs() const { return next_legs({}); }

  void run() {
    shared_.offer(0, Solution{});
    dfs(0, std::numeric_limits<double>::infinity());
  }

  void run_from(const Leg& first) {
    std::vector<Leg> cur{first};
    auto sched = schedule_route(g_, cur);
    if (!admissible(cur, sched, std::numeric_limits<double>::infinity())) return;
    cur_ = cur;
    cur_sched_ = sched;
    mark(first, 1);
    if (sched.feasible) offer();
    dfs(0, std::numeric_limits<double>::infinity());
  }

 private:
  std::vector<Leg> next_legs(const std::vector<Leg>& cur) const {
    std::vector<Leg> out;
    const std::size_t from = cur.empty() ? ActionGraph::kDepot : cur.back().delivery;
    for (auto a : g_.out_arcs(from)) {
      const auto p = g_.arc(a).to;
      if (!g_.is_pickup(p) || used_[p]) continue;
      for (auto d : by_pickup_[p])
        if (!used_[d]) out.push_back({p, d});
    }
    return out;
  }

  void mark(const Leg& l, int delta) {
    used_[l.pickup] = delta > 0;
    used_[l.delivery] = delta > 0;
    served_ += 2 * delta;
  }

  bool admissible(const std::vector<Leg>& cur, const ScheduleResult& s, double prev_cost) const {
    if (!s.windows_ok) return false;
    if (s.span_to_last_delivery > g_.parameters().shift_limit_min + kTimeTol) return false;
    if (symmetry_ && route_cost(g_, cur, false) > prev_cost + kTimeTol) return false;
    return true;
  }

  int bound() {
    int b = served_ + 2 * matcher_.size(used_);
    if (cap_) b = std::min(b, *cap_);
    return b;
  }

  void offer() {
    if (served_ <= shared_.best_value.load()) return;
    Solution s;
    for (std::size_t r = 0; r < done_.size(); ++r) s.routes.push_back(to_route(g_, done_[r], done_sched_[r], int(r)));
    s.routes.push_back(to_route(g_, cur_, cur_sched_, int(done_.size())));
    shared_.offer(served_, s);
  }

  void dfs(int k, double prev_cost) {
    if (shared_.over_limit()) return;
    if (bound() <= shared_.best_value.load()) return;

    for (const auto& leg : next_legs(cur_)) {
      cur_.push_back(leg);
      auto sched = schedule_route(g_, cur_);
      if (admissible(cur_, sched, prev_cost)) {
        auto saved = std::move(cur_sched_);
        cur_sched_ = std::move(sched);
        mark(leg, 1);
        if (cur_sched_.feasible) offer();
        dfs(k, prev_cost);
        mark(leg, -1);
        cur_sched_ = std::move(saved);
      }
      cur_.pop_back();
      if (shared_.stopped.load(std::memory_order_relaxed)) return;
      if (bound() <= shared_.best_value.load()) return;
    }

    if (!cur_.empty() && cur_sched_.feasible && k + 1 < K_) {
      const double cost = route_cost(g_, cur_, true);
      if (symmetry_ && cost > prev_cost + kTimeTol) return;
      done_.push_back(std::move(cur_));
      done_sched_.push_back(std::move(cur_sched_));
      cur_.clear();
      cur_sched_ = {};
      dfs(k + 1, cost);
      cur_ = std::move(done_.back());
      cur_sched_ = std::move(done_sched_.back());
      done_.pop_back();
      done_sched_.pop_back();
    }
  }

  const ActionGraph& g_;
  int K_;
  bool symmetry_;
  std::optional<int> cap_;
  Shared& shared_;
  std::vector<char> used_;
  std::vector<Leg> legs_;
  LegMatcher matcher_;
  std::vector<std::vector<std::size_t>> by_pickup_;
  std::vector<Leg> cur_;
  ScheduleResult cur_sched_;
  std::vector<std::vector<Leg>> done_;
  std::vector<ScheduleResult> done_sched_;
  int served_ = 0;
};

SolveResult exact_solve(const Instance& instance, const ActionGraph& graph, const SolveOptions& options, int workers,
                        const std::vector<char>& excluded, std::optional<int> cap,
                        const std::optional<Solution>& warm, Shared& shared) {
  (void)instance;
  if (warm) shared.offer(objective_of(*warm), *warm);

  if (options.deterministic) {
    ExactSearch search(graph, workers, options.symmetry_breaking, cap, shared, excluded);
    search.run();
  } else {
    ExactSearch probe(graph, workers, options.symmetry_breaking, cap, shared, excluded);
    shared.offer(0, Solution{});
    auto firsts = probe.first_legs();
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::size_t> next{0};
    auto lane = [&] {
      for (auto i = next.fetch_add(1); i < firsts.size(); i = next.fetch_add(1)) {
        ExactSearch search(graph, workers, options.symmetry_breaking, cap, shared, excluded);
        search.run_from(firsts[i]);
      }
    };
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, lane));
    for (auto& j : jobs) j.get();
  }

  SolveResult res;
  {
    std::lock_guard lock(shared.mutex);
    res.solution = shared.best;
  }
  res.objective = std::max(0, shared.best_value.load());
  res.optimal = !shared.stopped.load();
  res.stats.nodes = shared.nodes.load();
  return res;
}

void apply_limits(Shared& shared, const SolveOptions& options) {
  shared.node_limit = options.node_limit;
  shared.time_limit_s = options.time_limit_s;
}

void order_routes_by_cost(const ActionGraph& graph, Solution& s) {
  // Workers are identical; listing routes by non-increasing operational cost
  // matches the ordering imposed by symmetry breaking.
  auto cost = [&](const Route& r) {
    double c = 0.0;
    for (std::size_t v = 0; v + 1 < r.visits.size(); ++v)
      c += graph.find_arc(*graph.node_of(r.visits[v].request_id), *graph.node_of(r.visits[v + 1].request_id))->op_time_min;
    if (!r.visits.empty()) c += graph.find_arc(*graph.node_of(r.visits.back().request_id), ActionGraph::kDepot)->op_time_min;
    return c;
  };
  std::stable_sort(s.routes.begin(), s.routes.end(),
                   [&](const Route& a, const Route& b) { return cost(a) > cost(b); });
  for (std::size_t r = 0; r < s.routes.size(); ++r) s.routes[r].worker_index = static_cast<int>(r);
}

SolveResult sequential(const Instance& instance, const ActionGraph& graph, int workers, const SolveOptions& limits) {
  auto t0 = Clock::now();
  std::vector<char> used(graph.node_count(), 0);
  SolveResult out;
  out.optimal = true;
  const int total = static_cast<int>(graph.pickup_count() + graph.delivery_count());
  for (int k = 0; k < workers; ++k) {
    Shared shared;
    apply_limits(shared, limits);
    SolveOptions one;
    one.deterministic = true;
    auto r = exact_solve(instance, graph, one, 1, used, std::nullopt, std::nullopt, shared);
    out.stats.nodes += r.stats.nodes;
    out.optimal = out.optimal && r.optimal;
    if (r.solution.routes.empty()) break;
    auto route = r.solution.routes.front();
    route.worker_index = k;
    for (const auto& v : route.visits) used[*graph.node_of(v.request_id)] = 1;
    out.solution.routes.push_back(std::move(route));
    out.objective = objective_of(out.solution);
    if (out.objective == total) break;
  }
  out.objective = objective_of(out.solution);
  out.stats.seconds = seconds_since(t0);
  return out;
}

}  // namespace

SolveResult heuristic_sequential(const Instance& instance, const ActionGraph& graph, int workers,
                                 const SolveOptions& limits) {
  if (workers < 1) throw ArgumentError("at least one worker is required");
  auto r = sequential(instance, graph, workers, limits);
  // The sequence of single-worker optima is a heuristic; optimal only refers
  // to each single-worker solve here.
  return r;
}

SolveResult solve_branch_and_bound(const Instance& instance, const ActionGraph& graph, const SolveOptions& options,
                                   int workers) {
  if (workers < 1) throw ArgumentError("at least one worker is required");
  if (options.node_limit && *options.node_limit == 0) throw ArgumentError("node limit must be positive");
  if (options.time_limit_s && !(*options.time_limit_s > 0.0)) throw ArgumentError("time limit must be positive");
  auto t0 = Clock::now();

  SolveResult res;
  std::optional<int> cap = options.upper_bound;
  if (options.use_upper_bound) {
    auto ub = compute_upper_bound(instance, graph, workers, options);
    res.stats.upper_bound = ub.value;
    cap = cap ? std::min(*cap, ub.value) : ub.value;
  } else if (cap) {
    res.stats.upper_bound = cap;
  }

  std::optional<Solution> warm;
  if (options.use_warm_start) {
    auto h = sequential(instance, graph, workers, options);
    warm = h.solution;
    res.stats.warm_start_value = h.objective;
  }

  Shared shared;
  apply_limits(shared, options);
  if (options.time_limit_s) {
    double left = *options.time_limit_s - seconds_since(t0);
    shared.time_limit_s = std::max(left, 1e-3);
  }
  std::vector<char> excluded(graph.node_count(), 0);
  auto r = exact_solve(instance, graph, options, workers, excluded, cap, warm, shared);
  res.solution = std::move(r.solution);
  res.objective = r.objective;
  res.optimal = r.optimal;
  res.stats.nodes = r.stats.nodes;
  if (options.symmetry_breaking) order_routes_by_cost(graph, res.solution);
  res.stats.seconds = seconds_since(t0);
  return res;
}

Solution brute_force(const Instance& instance, const ActionGraph& graph, int workers) {
  (void)instance;
  const auto n = graph.node_count() - 1;
  if (n > kBruteForceLimit)
    throw LimitError("brute force is limited to " + std::to_string(kBruteForceLimit) + " requests");
  if (workers < 1) throw ArgumentError("at least one worker is required");

  // Every arc-consistent sequence of legs over distinct requests, scheduled.
  std::vector<std::uint32_t> masks;
  std::unordered_map<std::uint32_t, std::vector<Leg>> route_for;
  std::vector<Leg> seq;
  auto bit = [](std::size_t node) { return std::uint32_t{1} << (node - 1); };

  auto extend = [&](auto&& self, std::uint32_t mask) -> void {
    if (!seq.empty() && graph.has_arc(seq.back().delivery, ActionGraph::kDepot) && !route_for.count(mask)) {
      if (schedule_route(graph, seq).feasible) {
        route_for.emplace(mask, seq);
        masks.push_back(mask);
      }
    }
    const std::size_t from = seq.empty() ? ActionGraph::kDepot : seq.back().delivery;
    for (std::size_t p = 1; p <= n; ++p) {
      if (!graph.is_pickup(p) || (mask & bit(p)) || !graph.has_arc(from, p)) continue;
      for (std::size_t d = 1; d <= n; ++d) {
        if (!graph.is_delivery(d) || (mask & bit(d)) || !graph.has_arc(p, d)) continue;
        seq.push_back({p, d});
        self(self, mask | bit(p) | bit(d));
        seq.pop_back();
      }
    }
  };
  extend(extend, 0);

  // Best union of at most `workers` disjoint feasible routes.
  std::unordered_map<std::uint32_t, std::vector<std::uint32_t>> reach{{0u, {}}};
  for (int k = 0; k < workers; ++k) {
    auto next = reach;
    for (const auto& [have, parts] : reach) {
      for (auto m : masks) {
        if (have & m) continue;
        auto u = have | m;
        if (next.count(u)) continue;
        auto p = parts;
        p.push_back(m);
        next.emplace(u, std::move(p));
      }
    }
    reach = std::move(next);
  }
  std::uint32_t best = 0;
  for (const auto& [u, parts] : reach)
    if (std::popcount(u) > std::popcount(best) || (std::popcount(u) == std::popcount(best) && u < best)) best = u;

  Solution sol;
  int k = 0;
  for (auto m : reach.at(best)) {
    const auto& legs = route_for.at(m);
    sol.routes.push_back(to_route(graph, legs, schedule_route(graph, legs), k++));
  }
  return sol;
}

namespace {

// Single-worker relaxation: no time bounds, working time K*T, connections
// between consecutive legs either by bike or through the depot.
class RelaxedSearch {
 public:
  RelaxedSearch(const ActionGraph& g, double budget, Shared& shared)
      : g_(g), budget_(budget), shared_(shared), legs_(compatible_legs(g)), matcher_(g.node_count(), legs_) {
    const auto N = g.node_count();
    const auto& p = g.parameters();
    auto bike = [&](std::size_t a, std::size_t b) {
      double d = g.distance(a, b);
      return std::isfinite(d) ? minutes_of(p.bike_speed_kmh, d) : kUnreachable;
    };
    from_depot_.assign(N, kUnreachable);
    to_depot_.assign(N, kUnreachable);
    for (std::size_t i = 1; i < N; ++i) {
      if (auto a = g.find_arc(ActionGraph::kDepot, i)) from_depot_[i] = a->op_time_min;
      if (auto a = g.find_arc(i, ActionGraph::kDepot)) to_depot_[i] = a->op_time_min;
    }
    conn_.assign(N * N, kUnreachable);
    for (std::size_t d = 1; d < N; ++d) {
      if (!g.is_delivery(d)) continue;
      for (std::size_t q = 1; q < N; ++q) {
        if (!g.is_pickup(q)) continue;
        conn_[d * N + q] = std::min(bike(d, q), to_depot_[d] + from_depot_[q]);
      }
    }
    // Keep only legs that can start from and return to the depot.
    std::erase_if(legs_, [&](const Leg& l) {
      return !std::isfinite(from_depot_[l.pickup]) || !std::isfinite(to_depot_[l.delivery]);
    });
    matcher_ = LegMatcher(N, legs_);
    min_return_ = kUnreachable;
    for (const auto& l : legs_) min_return_ = std::min(min_return_, to_depot_[l.delivery]);
    // Cheapest way to append a leg starting at each pickup.
    leg_floor_.assign(N, kUnreachable);
    for (const auto& l : legs_) {
      double in = from_depot_[l.pickup];
      for (const auto& o : legs_) in = std::min(in, conn_[o.delivery * N + l.pickup]);
      leg_floor_[l.pickup] = std::min(leg_floor_[l.pickup], in + drive(l));
    }
    used_.assign(N, 0);
  }

  void run() {
    shared_.offer(0, Solution{});
    dfs(ActionGraph::kDepot, 0.0);
  }

 private:
  double drive(const Leg& l) const { return g_.find_arc(l.pickup, l.delivery)->op_time_min; }

  int bound(double used_time) {
    int pairs = matcher_.size(used_);
    double room = budget_ - used_time - min_return_;
    std::vector<double> floors;
    for (std::size_t i = 1; i < used_.size(); ++i)
      if (!used_[i] && std::isfinite(leg_floor_[i])) floors.push_back(leg_floor_[i]);
    std::sort(floors.begin(), floors.end());
    int fit = 0;
    for (double f : floors) {
      if (f > room + kTimeTol) break;
      room -= f;
      ++fit;
    }
    return served_ + 2 * std::min(pairs, fit);
  }

  void dfs(std::size_t last, double used_time) {
    if (shared_.over_limit()) return;
    if (last != ActionGraph::kDepot && used_time + to_depot_[last] <= budget_ + kTimeTol &&
        served_ > shared_.best_value.load())
      shared_.best_value.store(served_);
    if (bound(used_time) <= shared_.best_value.load()) return;

    std::uint64_t key = 0;
    for (std::size_t i = 1; i < used_.size(); ++i)
      if (used_[i]) key |= std::uint64_t{1} << (i - 1);
    key = key * 131 + last;
    if (memo_.size() < kMemoCap || memo_.count(key)) {
      auto [it, inserted] = memo_.emplace(key, used_time);
      if (!inserted) {
        if (it->second <= used_time + 1e-9) return;
        it->second = used_time;
      }
    }

    const auto N = g_.node_count();
    for (const auto& l : legs_) {
      if (used_[l.pickup] || used_[l.delivery]) continue;
      double step = (last == ActionGraph::kDepot ? from_depot_[l.pickup] : conn_[last * N + l.pickup]) + drive(l);
      if (used_time + step + to_depot_[l.delivery] > budget_ + kTimeTol) continue;
      used_[l.pickup] = used_[l.delivery] = 1;
      served_ += 2;
      dfs(l.delivery, used_time + step);
      served_ -= 2;
      used_[l.pickup] = used_[l.delivery] = 0;
      if (shared_.stopped.load(std::memory_order_relaxed)) return;
    }
  }

  static constexpr std::size_t kMemoCap = 4'000'000;

  const ActionGraph& g_;
  double budget_;
  Shared& shared_;
  std::vector<Leg> legs_;
  LegMatcher matcher_;
  std::vector<double> from_depot_, to_depot_, conn_, leg_floor_;
  double min_return_ = 0.0;
  std::vector<char> used_;
  std::unordered_map<std::uint64_t, double> memo_;
  int served_ = 0;
};

}  // namespace

UpperBound compute_upper_bound(const Instance& instance, const ActionGraph& graph, int workers,
                               const SolveOptions& limits) {
  (void)instance;
  if (workers < 1) throw ArgumentError("at least one worker is required");
  if (graph.node_count() > 65) throw ArgumentError("upper bound search supports at most 64 requests");
  Shared shared;
  apply_limits(shared, limits);
  if (!shared.node_limit) shared.node_limit = 20'000'000;
  RelaxedSearch search(graph, workers * graph.parameters().shift_limit_min, shared);
  search.run();
  if (!shared.stopped.load()) return {shared.best_value.load(), true};
  std::vector<char> none(graph.node_count(), 0);
  LegMatcher m(graph.node_count(), compatible_legs(graph));
  return {2 * m.size(none), false};
}

}  // namespace evrp
