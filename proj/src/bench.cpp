#include "bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include <json.hpp>

#include "action_graph.hpp"
#include "distance.hpp"
#include "solver.hpp"

namespace evrp {

std::vector<Station> default_stations() {
  return {{"S1", {-2.6, 1.9}}, {"S2", {-1.4, -0.6}}, {"S3", {-2.1, -2.4}}, {"S4", {0.3, 2.8}}, {"S5", {1.8, 1.1}},
          {"S6", {0.2, -0.3}}, {"S7", {2.4, -1.7}}, {"S8", {0.9, 3.9}},   {"S9", {3.3, 0.4}}};
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool to_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

bool to_int(const std::string& s, int& v) {
  if (s.empty()) return false;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::vector<Station> parse_stations_csv(const std::string& text) {
  std::vector<Station> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    auto f = split(line, ',');
    Station s;
    if (f.size() != 3 || f[0].empty() || !to_double(f[1], s.at.x_km) || !to_double(f[2], s.at.y_km)) {
      if (lineno == 1 && out.empty()) continue;  // header
      throw ParseError("stations line " + std::to_string(lineno) + ": expected 'id,x_km,y_km'");
    }
    s.id = f[0];
    out.push_back(std::move(s));
  }
  if (out.empty()) throw ParseError("stations file has no stations");
  return out;
}

void GeneratorConfig::validate() const {
  parameters.validate();
  if (size < 0 || size % 2 != 0) throw ArgumentError("request total must be even and non-negative");
  if (stations.empty()) throw ArgumentError("at least one station is required");
  if (!(window_open_min >= 0.0 && window_open_min <= window_close_min && window_close_min <= 1440.0))
    throw ArgumentError("time window must satisfy 0 <= open <= close <= 1440");
  auto charge_ok = [](double lo, double hi) { return lo >= 0.0 && lo <= hi && hi <= 1.0; };
  if (!charge_ok(pickup_charge_min, pickup_charge_max) || !charge_ok(delivery_charge_min, delivery_charge_max))
    throw ArgumentError("charge bounds must satisfy 0 <= min <= max <= 1");
  if (!(detour_factor >= 1.0)) throw ArgumentError("detour factor must be at least 1");
}

Instance generate_instance(const GeneratorConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> station(0, config.stations.size() - 1);
  std::uniform_int_distribution<long> minute(static_cast<long>(std::ceil(config.window_open_min)),
                                             static_cast<long>(std::floor(config.window_close_min)));
  auto charge = [&](double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return std::clamp(std::round(u(rng) * 100.0) / 100.0, lo, hi);
  };

  Instance inst;
  inst.name = "rand" + std::to_string(config.size) + "_" + std::to_string(config.seed);
  inst.parameters = config.parameters;
  inst.depot = Location{"depot", {}, config.depot};
  inst.distance_source = EuclideanSource{config.detour_factor};

  const int pairs = config.size / 2;
  const int width = pairs >= 100 ? 3 : 2;
  auto id = [&](char prefix, int n) {
    std::ostringstream os;
    os << prefix << std::setw(width) << std::setfill('0') << n;
    return os.str();
  };
  for (int kind = 0; kind < 2; ++kind) {
    for (int n = 1; n <= pairs; ++n) {
      Request r;
      r.kind = kind == 0 ? RequestKind::Pickup : RequestKind::Delivery;
      r.id = id(kind == 0 ? 'p' : 'd', n);
      const auto& s = config.stations[station(rng)];
      r.location = Location{s.id, {}, s.at};
      r.charge = kind == 0 ? charge(config.pickup_charge_min, config.pickup_charge_max)
                           : charge(config.delivery_charge_min, config.delivery_charge_max);
      r.time_min = static_cast<double>(minute(rng));
      inst.requests.push_back(std::move(r));
    }
  }
  inst.validate();
  return inst;
}

double ExperimentRecord::served_pct() const {
  if (requests == 0) return 100.0;
  return 100.0 * std::max(served_baseline, served_speedup) / requests;
}

double ExperimentRecord::improvement_pct() const {
  if (!(cpu1_s > 0.0)) return 0.0;
  return (cpu1_s - cpu2_s) / cpu1_s * 100.0;
}

std::vector<ExperimentRecord> run_experiment(const std::vector<Instance>& instances, const std::vector<int>& workers,
                                             const ExperimentOptions& options) {
  for (int k : workers)
    if (k < 1) throw ArgumentError("worker counts must be positive");

  struct Cell {
    std::size_t instance;
    int workers;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (int k : workers) cells.push_back({i, k});

  std::vector<ActionGraph> graphs;
  for (const auto& inst : instances) graphs.push_back(build_graph(inst, build_distances(inst)));

  std::vector<ExperimentRecord> records(cells.size());
  auto run_cell = [&](std::size_t c) {
    const auto& inst = instances[cells[c].instance];
    const auto& graph = graphs[cells[c].instance];
    const int K = cells[c].workers;
    auto& rec = records[c];
    rec.instance = inst.name;
    rec.requests = static_cast<int>(inst.requests.size());
    rec.workers = K;

    SolveOptions base;
    base.time_limit_s = options.time_limit_s;
    auto t0 = std::chrono::steady_clock::now();
    auto r1 = solve_branch_and_bound(inst, graph, base, K);
    rec.cpu1_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.served_baseline = r1.objective;
    rec.optimal_baseline = r1.optimal;

    SolveOptions fast = base;
    fast.symmetry_breaking = true;
    fast.use_upper_bound = true;
    fast.use_warm_start = true;
    t0 = std::chrono::steady_clock::now();
    auto r2 = solve_branch_and_bound(inst, graph, fast, K);
    rec.cpu2_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.served_speedup = r2.objective;
    rec.optimal_speedup = r2.optimal;
    rec.upper_bound = r2.stats.upper_bound.value_or(-1);
    if (rec.optimal_baseline && rec.optimal_speedup && rec.served_baseline != rec.served_speedup)
      throw StructureError("optimal objectives disagree on " + inst.name + " with K=" + std::to_string(K));
  };

  const unsigned threads = std::max(1u, options.threads);
  if (threads == 1) {
    for (std::size_t c = 0; c < cells.size(); ++c) run_cell(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> lanes;
    for (unsigned t = 0; t < threads; ++t)
      lanes.push_back(std::async(std::launch::async, [&] {
        for (auto c = next.fetch_add(1); c < cells.size(); c = next.fetch_add(1)) run_cell(c);
      }));
    for (auto& l : lanes) l.get();
  }
  return records;
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "text") return ReportFormat::Text;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw ArgumentError("unknown report format '" + name + "' (text, csv, json)");
}

std::vector<SizeAverage> size_averages(const std::vector<ExperimentRecord>& records) {
  std::map<std::pair<int, int>, SizeAverage> groups;
  for (const auto& r : records) {
    auto& g = groups[{r.requests, r.workers}];
    g.requests = r.requests;
    g.workers = r.workers;
    ++g.count;
    g.served_pct += r.served_pct();
    g.cpu1_s += r.cpu1_s;
    g.cpu2_s += r.cpu2_s;
  }
  std::vector<SizeAverage> out;
  for (auto& [key, g] : groups) {
    g.served_pct /= g.count;
    g.cpu1_s /= g.count;
    g.cpu2_s /= g.count;
    g.improvement_pct = g.cpu1_s > 0.0 ? (g.cpu1_s - g.cpu2_s) / g.cpu1_s * 100.0 : 0.0;
    out.push_back(g);
  }
  return out;
}

namespace {

constexpr const char* kCsvHeader =
    "instance,requests,workers,served_baseline,served_speedup,served_pct,cpu1_s,cpu2_s,improv_pct,"
    "optimal_baseline,optimal_speedup,upper_bound";

std::vector<int> worker_columns(const std::vector<ExperimentRecord>& records) {
  std::vector<int> ks;
  for (const auto& r : records)
    if (std::find(ks.begin(), ks.end(), r.workers) == ks.end()) ks.push_back(r.workers);
  std::sort(ks.begin(), ks.end());
  return ks;
}

std::string pad(const std::string& s, std::size_t w, bool left = false) {
  if (s.size() >= w) return s;
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

std::string text_report(const std::vector<ExperimentRecord>& records) {
  const auto ks = worker_columns(records);
  std::size_t name_w = 8;
  for (const auto& r : records) name_w = std::max(name_w, r.instance.size());
  const std::size_t w = 9;
  std::ostringstream os;

  auto pct = [](double v) { return fixed(v, 0) + "%"; };
  auto secs = [](double v) { return fixed(v, 2); };

  // Per instance.
  os << pad("Instance", name_w, true) << pad("P U D", 7);
  for (int k : ks) os << pad("k=" + std::to_string(k), 3 * w);
  os << '\n' << std::string(name_w + 7, ' ');
  for (std::size_t i = 0; i < ks.size(); ++i) os << pad("Served", w) << pad("CPU1", w) << pad("CPU2", w);
  os << '\n';
  std::vector<std::string> order;
  for (const auto& r : records)
    if (std::find(order.begin(), order.end(), r.instance) == order.end()) order.push_back(r.instance);
  for (const auto& name : order) {
    int requests = 0;
    for (const auto& r : records)
      if (r.instance == name) requests = r.requests;
    os << pad(name, name_w, true) << pad(std::to_string(requests), 7);
    for (int k : ks) {
      auto it = std::find_if(records.begin(), records.end(),
                             [&](const ExperimentRecord& r) { return r.instance == name && r.workers == k; });
      if (it == records.end()) {
        os << pad("-", w) << pad("-", w) << pad("-", w);
        continue;
      }
      std::string mark = it->optimal_baseline && it->optimal_speedup ? "" : "*";
      os << pad(pct(it->served_pct()) + mark, w) << pad(secs(it->cpu1_s), w) << pad(secs(it->cpu2_s), w);
    }
    os << '\n';
  }

  // Averages per request count.
  os << '\n' << pad("P U D", 7);
  for (int k : ks) os << pad("k=" + std::to_string(k), 4 * w);
  os << '\n' << std::string(7, ' ');
  for (std::size_t i = 0; i < ks.size(); ++i) os << pad("Served", w) << pad("CPU1", w) << pad("CPU2", w) << pad("Improv", w);
  os << '\n';
  const auto avgs = size_averages(records);
  std::vector<int> sizes;
  for (const auto& a : avgs)
    if (std::find(sizes.begin(), sizes.end(), a.requests) == sizes.end()) sizes.push_back(a.requests);
  for (int n : sizes) {
    os << pad(std::to_string(n), 7);
    for (int k : ks) {
      auto it = std::find_if(avgs.begin(), avgs.end(),
                             [&](const SizeAverage& a) { return a.requests == n && a.workers == k; });
      if (it == avgs.end()) {
        os << pad("-", w) << pad("-", w) << pad("-", w) << pad("-", w);
        continue;
      }
      os << pad(pct(it->served_pct), w) << pad(secs(it->cpu1_s), w) << pad(secs(it->cpu2_s), w)
         << pad(fixed(it->improvement_pct, 2) + "%", w);
    }
    os << '\n';
  }
  bool any_limit = std::any_of(records.begin(), records.end(), [](const ExperimentRecord& r) {
    return !r.optimal_baseline || !r.optimal_speedup;
  });
  if (any_limit) os << "\n* a run stopped at its limit; optimality not proven\n";
  return os.str();
}

std::string csv_report(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.instance << ',' << r.requests << ',' << r.workers << ',' << r.served_baseline << ',' << r.served_speedup
       << ',' << num(r.served_pct()) << ',' << num(r.cpu1_s) << ',' << num(r.cpu2_s) << ','
       << num(r.improvement_pct()) << ',' << (r.optimal_baseline ? 1 : 0) << ',' << (r.optimal_speedup ? 1 : 0)
       << ',' << r.upper_bound << '\n';
  }
  return os.str();
}

std::string json_report(const std::vector<ExperimentRecord>& records) {
  nlohmann::ordered_json doc;
  doc["format_version"] = 1;
  auto recs = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    recs.push_back({{"instance", r.instance},
                    {"requests", r.requests},
                    {"workers", r.workers},
                    {"served_baseline", r.served_baseline},
                    {"served_speedup", r.served_speedup},
                    {"served_pct", r.served_pct()},
                    {"cpu1_s", r.cpu1_s},
                    {"cpu2_s", r.cpu2_s},
                    {"improv_pct", r.improvement_pct()},
                    {"optimal_baseline", r.optimal_baseline},
                    {"optimal_speedup", r.optimal_speedup},
                    {"upper_bound", r.upper_bound}});
  }
  doc["records"] = std::move(recs);
  auto avgs = nlohmann::ordered_json::array();
  for (const auto& a : size_averages(records)) {
    avgs.push_back({{"requests", a.requests},
                    {"workers", a.workers},
                    {"instances", a.count},
                    {"served_pct", a.served_pct},
                    {"cpu1_s", a.cpu1_s},
                    {"cpu2_s", a.cpu2_s},
                    {"improv_pct", a.improvement_pct}});
  }
  doc["averages"] = std::move(avgs);
  return doc.dump(2) + "\n";
}

}  // namespace

std::string emit_report(const std::vector<ExperimentRecord>& records, ReportFormat format) {
  if (records.empty()) throw ArgumentError("no experiment records to report");
  switch (format) {
    case ReportFormat::Text: return text_report(records);
    case ReportFormat::Csv: return csv_report(records);
    case ReportFormat::Json: return json_report(records);
  }
  return {};
}

std::vector<ExperimentRecord> parse_csv_records(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::size_t lineno = 0;
  std::vector<ExperimentRecord> out;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1) {
      if (line != kCsvHeader) throw ParseError("report CSV: unexpected header");
      continue;
    }
    auto f = split(line, ',');
    ExperimentRecord r;
    int ob = 0, os = 0;
    double ignored = 0;
    bool ok = f.size() == 12 && !f[0].empty();
    if (ok) {
      r.instance = f[0];
      ok = to_int(f[1], r.requests) && to_int(f[2], r.workers) && to_int(f[3], r.served_baseline) &&
           to_int(f[4], r.served_speedup) && to_double(f[5], ignored) && to_double(f[6], r.cpu1_s) &&
           to_double(f[7], r.cpu2_s) && to_double(f[8], ignored) && to_int(f[9], ob) && to_int(f[10], os) &&
           to_int(f[11], r.upper_bound);
    }
    if (!ok) throw ParseError("report CSV line " + std::to_string(lineno) + ": malformed record");
    r.optimal_baseline = ob != 0;
    r.optimal_speedup = os != 0;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace evrp
