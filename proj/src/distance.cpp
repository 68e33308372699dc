#include "distance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <istream>
#include <queue>
#include <set>
#include <sstream>
#include <thread>

#include "io.hpp"

namespace evrp {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::size_t RoadNetwork::add_node(const std::string& id, std::optional<Coordinates> coords) {
  if (id.empty()) throw ArgumentError("road node with empty id");
  auto [it, inserted] = index_.emplace(id, ids_.size());
  if (!inserted) throw ArgumentError("duplicate road node '" + id + "'");
  ids_.push_back(id);
  coords_.push_back(coords);
  out_.emplace_back();
  return it->second;
}

void RoadNetwork::add_link(const std::string& from, const std::string& to, double length_km) {
  auto f = index_of(from);
  auto t = index_of(to);
  if (!f) throw ArgumentError("link references unknown node '" + from + "'");
  if (!t) throw ArgumentError("link references unknown node '" + to + "'");
  if (!(length_km >= 0.0)) throw ArgumentError("link length must be non-negative");
  out_[*f].push_back(links_.size());
  links_.push_back({*f, *t, length_km});
}

std::optional<std::size_t> RoadNetwork::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> RoadNetwork::shortest_from(std::size_t source) const {
  std::vector<double> dist(ids_.size(), kUnreachable);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (auto li : out_[u]) {
      const auto& link = links_[li];
      double nd = d + link.length_km;
      if (nd < dist[link.to]) {
        dist[link.to] = nd;
        heap.emplace(nd, link.to);
      }
    }
  }
  return dist;
}

RoadNetwork load_road_network(std::istream& nodes_csv, std::istream& links_csv) {
  RoadNetwork net;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(nodes_csv, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    double x = 0, y = 0;
    bool numeric = f.size() >= 3 && parse_double(f[1], x) && parse_double(f[2], y);
    if (!numeric) {
      if (lineno == 1 && (f.size() >= 2 || f[0] == "id")) continue;  // header
      if (f.size() == 1 && !f[0].empty()) {
        try {
          net.add_node(f[0]);
        } catch (const ArgumentError& e) {
          throw ParseError("nodes line " + std::to_string(lineno) + ": " + e.what());
        }
        continue;
      }
      throw ParseError("nodes line " + std::to_string(lineno) + ": expected id,x,y but got '" + line + "'");
    }
    try {
      net.add_node(f[0], Coordinates{x, y});
    } catch (const ArgumentError& e) {
      throw ParseError("nodes line " + std::to_string(lineno) + ": " + e.what());
    }
  }

  lineno = 0;
  while (std::getline(links_csv, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    double len = 0;
    if (f.size() < 3 || !parse_double(f[2], len)) {
      if (lineno == 1 && f.size() >= 3) continue;  // header
      throw ParseError("links line " + std::to_string(lineno) + ": expected from,to,length_km but got '" +
                       line + "'");
    }
    try {
      net.add_link(f[0], f[1], len);
    } catch (const ArgumentError& e) {
      throw ParseError("links line " + std::to_string(lineno) + " ('" + line + "'): " + e.what());
    }
  }
  return net;
}

RoadNetwork load_road_network_files(const std::string& nodes_path, const std::string& links_path) {
  std::ifstream nodes(nodes_path);
  if (!nodes) throw IoError("cannot open node file '" + nodes_path + "'");
  std::ifstream links(links_path);
  if (!links) throw IoError("cannot open link file '" + links_path + "'");
  return load_road_network(nodes, links);
}

DistanceMatrix::DistanceMatrix(std::vector<std::string> labels)
    : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), kUnreachable) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second)
      throw ArgumentError("duplicate matrix label '" + labels_[i] + "'");
    set(i, i, 0.0);
  }
}

std::size_t DistanceMatrix::index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw ArgumentError("no distance entry for '" + label + "'");
  return it->second;
}

namespace {

std::vector<Location> unique_by_id(std::span<const Location> locations) {
  std::vector<Location> out;
  std::set<std::string> seen;
  for (const auto& loc : locations)
    if (seen.insert(loc.id).second) out.push_back(loc);
  return out;
}

std::vector<std::string> ids_of(const std::vector<Location>& locs) {
  std::vector<std::string> ids;
  ids.reserve(locs.size());
  for (const auto& l : locs) ids.push_back(l.id);
  return ids;
}

}  // namespace

DistanceMatrix shortest_path_matrix(const RoadNetwork& network, std::span<const Location> locations,
                                    unsigned threads) {
  auto locs = unique_by_id(locations);
  std::vector<std::size_t> nodes;
  for (const auto& loc : locs) {
    auto idx = network.index_of(loc.node_key());
    if (!idx)
      throw ArgumentError("location '" + loc.id + "' refers to unknown road node '" + loc.node_key() + "'");
    nodes.push_back(*idx);
  }

  DistanceMatrix m(ids_of(locs));
  std::vector<std::vector<double>> rows(locs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, locs.size()));

  auto run = [&](unsigned lane) {
    for (std::size_t i = lane; i < locs.size(); i += threads) rows[i] = network.shortest_from(nodes[i]);
  };
  if (threads <= 1) {
    run(0);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t) jobs.push_back(std::async(std::launch::async, run, t));
    for (auto& j : jobs) j.get();
  }

  for (std::size_t i = 0; i < locs.size(); ++i)
    for (std::size_t j = 0; j < locs.size(); ++j) m.set(i, j, rows[i][nodes[j]]);
  return m;
}

DistanceMatrix euclidean_matrix(std::span<const Location> locations, double detour_factor) {
  if (!(detour_factor >= 1.0)) throw ArgumentError("detour factor must be at least 1");
  auto locs = unique_by_id(locations);
  for (const auto& l : locs)
    if (!l.coords) throw ArgumentError("location '" + l.id + "' has no coordinates");
  DistanceMatrix m(ids_of(locs));
  for (std::size_t i = 0; i < locs.size(); ++i) {
    for (std::size_t j = 0; j < locs.size(); ++j) {
      double dx = locs[i].coords->x_km - locs[j].coords->x_km;
      double dy = locs[i].coords->y_km - locs[j].coords->y_km;
      m.set(i, j, detour_factor * std::hypot(dx, dy));
    }
  }
  return m;
}

DistanceMatrix matrix_for_locations(const DistanceMatrix& by_node, std::span<const Location> locations) {
  auto locs = unique_by_id(locations);
  std::vector<std::size_t> src;
  for (const auto& l : locs) {
    if (!by_node.contains(l.node_key()))
      throw ArgumentError("location '" + l.id + "' refers to unknown matrix label '" + l.node_key() + "'");
    src.push_back(by_node.index(l.node_key()));
  }
  DistanceMatrix m(ids_of(locs));
  for (std::size_t i = 0; i < locs.size(); ++i)
    for (std::size_t j = 0; j < locs.size(); ++j) m.set(i, j, i == j ? 0.0 : by_node.at(src[i], src[j]));
  return m;
}

std::vector<Location> instance_locations(const Instance& instance) {
  std::vector<Location> all;
  all.reserve(instance.requests.size() + 1);
  all.push_back(instance.depot);
  for (const auto& r : instance.requests) all.push_back(r.location);
  return unique_by_id(all);
}

namespace {

std::string resolve(const Instance& instance, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative() && !instance.base_dir.empty()) p = std::filesystem::path(instance.base_dir) / p;
  return p.string();
}

}  // namespace

DistanceMatrix build_distances(const Instance& instance) {
  auto locs = instance_locations(instance);
  return std::visit(
      [&](const auto& src) -> DistanceMatrix {
        using T = std::decay_t<decltype(src)>;
        if constexpr (std::is_same_v<T, EuclideanSource>) {
          return euclidean_matrix(locs, src.detour_factor);
        } else if constexpr (std::is_same_v<T, MatrixSource>) {
          if (!src.file.empty()) return matrix_for_locations(load_matrix_file(resolve(instance, src.file)), locs);
          return matrix_for_locations(matrix_from_rows(src.labels, src.rows), locs);
        } else {
          auto net = load_road_network_files(resolve(instance, src.nodes_file), resolve(instance, src.links_file));
          return shortest_path_matrix(net, locs);
        }
      },
      instance.distance_source);
}

}  // namespace evrp
