#include "io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace evrp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json location_to_json(const Location& loc) {
  ordered_json j;
  j["id"] = loc.id;
  if (!loc.network_node.empty()) j["node"] = loc.network_node;
  if (loc.coords) {
    j["x"] = loc.coords->x_km;
    j["y"] = loc.coords->y_km;
  }
  return j;
}

Location location_from_json(const json& j) {
  Location loc;
  if (j.is_string()) {
    loc.id = j.get<std::string>();
    return loc;
  }
  loc.id = j.at("id").get<std::string>();
  if (j.contains("node")) {
    const auto& n = j.at("node");
    loc.network_node = n.is_string() ? n.get<std::string>() : n.dump();
  }
  if (j.contains("x") || j.contains("y")) loc.coords = Coordinates{j.at("x").get<double>(), j.at("y").get<double>()};
  return loc;
}

double json_distance(const json& v) {
  if (v.is_null()) return kUnreachable;
  return v.get<double>();
}

void check_version(const json& doc, const char* what) {
  if (!doc.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
  if (doc.contains("format_version") && doc.at("format_version").get<int>() != kFormatVersion)
    throw ParseError(std::string(what) + ": unsupported format_version " + doc.at("format_version").dump());
}

template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

ordered_json instance_to_json(const Instance& instance) {
  const auto& p = instance.parameters;
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  if (!instance.name.empty()) doc["name"] = instance.name;
  doc["parameters"] = {
      {"max_range_km", p.max_range_km},
      {"recharge_time_min", p.recharge_time_min},
      {"shift_limit_min", p.shift_limit_min},
      {"workers", p.workers},
      {"ev_speed_kmh", p.ev_speed_kmh},
      {"bike_speed_kmh", p.bike_speed_kmh},
      {"park_and_unload_min", p.park_and_unload_min},
      {"load_and_exit_min", p.load_and_exit_min},
  };
  doc["depot"] = location_to_json(instance.depot);
  ordered_json reqs = ordered_json::array();
  for (const auto& r : instance.requests) {
    ordered_json j;
    j["id"] = r.id;
    j["kind"] = to_string(r.kind);
    j["location"] = location_to_json(r.location);
    j["charge"] = r.charge;
    j["time_min"] = r.time_min;
    reqs.push_back(std::move(j));
  }
  doc["requests"] = std::move(reqs);

  ordered_json src;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EuclideanSource>) {
          src["type"] = "euclidean";
          src["detour_factor"] = s.detour_factor;
        } else if constexpr (std::is_same_v<T, MatrixSource>) {
          src["type"] = "matrix";
          if (!s.file.empty()) {
            src["file"] = s.file;
          } else {
            src["labels"] = s.labels;
            ordered_json rows = ordered_json::array();
            for (const auto& row : s.rows) {
              ordered_json r = ordered_json::array();
              for (double v : row) r.push_back(std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr));
              rows.push_back(std::move(r));
            }
            src["rows"] = std::move(rows);
          }
        } else {
          src["type"] = "road_network";
          src["nodes"] = s.nodes_file;
          src["links"] = s.links_file;
        }
      },
      instance.distance_source);
  doc["distance_source"] = std::move(src);
  return doc;
}

Instance instance_from_json(const json& doc, const std::string& base_dir) {
  return guarded("instance", [&] {
    check_version(doc, "instance");
    Instance inst;
    inst.base_dir = base_dir;
    inst.name = doc.value("name", std::string{});
    const auto& p = doc.at("parameters");
    Parameters defaults;
    inst.parameters.max_range_km = p.value("max_range_km", defaults.max_range_km);
    inst.parameters.recharge_time_min = p.value("recharge_time_min", defaults.recharge_time_min);
    inst.parameters.shift_limit_min = p.value("shift_limit_min", defaults.shift_limit_min);
    inst.parameters.workers = p.value("workers", defaults.workers);
    inst.parameters.ev_speed_kmh = p.value("ev_speed_kmh", defaults.ev_speed_kmh);
    inst.parameters.bike_speed_kmh = p.value("bike_speed_kmh", defaults.bike_speed_kmh);
    inst.parameters.park_and_unload_min = p.value("park_and_unload_min", defaults.park_and_unload_min);
    inst.parameters.load_and_exit_min = p.value("load_and_exit_min", defaults.load_and_exit_min);
    inst.depot = location_from_json(doc.at("depot"));

    for (const auto& j : doc.at("requests")) {
      Request r;
      r.id = j.at("id").get<std::string>();
      auto kind = j.at("kind").get<std::string>();
      if (kind == "pickup")
        r.kind = RequestKind::Pickup;
      else if (kind == "delivery")
        r.kind = RequestKind::Delivery;
      else
        throw ParseError("request '" + r.id + "': kind must be \"pickup\" or \"delivery\", got \"" + kind + "\"");
      r.location = location_from_json(j.at("location"));
      r.charge = j.at("charge").get<double>();
      r.time_min = j.at("time_min").get<double>();
      inst.requests.push_back(std::move(r));
    }

    if (doc.contains("distance_source")) {
      const auto& s = doc.at("distance_source");
      auto type = s.at("type").get<std::string>();
      if (type == "euclidean") {
        inst.distance_source = EuclideanSource{s.value("detour_factor", 1.3)};
      } else if (type == "matrix") {
        MatrixSource m;
        m.file = s.value("file", std::string{});
        if (m.file.empty()) {
          m.labels = s.at("labels").get<std::vector<std::string>>();
          for (const auto& row : s.at("rows")) {
            std::vector<double> r;
            for (const auto& v : row) r.push_back(json_distance(v));
            m.rows.push_back(std::move(r));
          }
        }
        inst.distance_source = std::move(m);
      } else if (type == "road_network") {
        inst.distance_source = RoadNetworkSource{s.at("nodes").get<std::string>(), s.at("links").get<std::string>()};
      } else {
        throw ParseError("unknown distance_source type \"" + type + "\"");
      }
    }
    try {
      inst.validate();
    } catch (const ArgumentError& e) {
      throw ParseError(std::string("instance: ") + e.what());
    }
    return inst;
  });
}

std::string dump_instance(const Instance& instance) { return instance_to_json(instance).dump(2) + "\n"; }

Instance parse_instance(const std::string& text, const std::string& base_dir) {
  json doc = guarded("instance", [&] { return json::parse(text); });
  return instance_from_json(doc, base_dir);
}

Instance load_instance_file(const std::string& path) {
  auto dir = std::filesystem::path(path).parent_path().string();
  return parse_instance(read_text_file(path), dir);
}

ordered_json solution_to_json(const Solution& solution) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["served"] = served_count(solution);
  ordered_json routes = ordered_json::array();
  for (const auto& r : solution.routes) {
    ordered_json jr;
    jr["worker"] = r.worker_index;
    jr["depot_departure_min"] = r.depot_departure_min;
    jr["depot_return_min"] = r.depot_return_min;
    ordered_json visits = ordered_json::array();
    for (const auto& v : r.visits) visits.push_back({{"request", v.request_id}, {"time_min", v.time_min}});
    jr["visits"] = std::move(visits);
    routes.push_back(std::move(jr));
  }
  doc["routes"] = std::move(routes);
  return doc;
}

Solution solution_from_json(const json& doc) {
  return guarded("solution", [&] {
    check_version(doc, "solution");
    Solution s;
    for (const auto& jr : doc.at("routes")) {
      Route r;
      r.worker_index = jr.at("worker").get<int>();
      r.depot_departure_min = jr.at("depot_departure_min").get<double>();
      r.depot_return_min = jr.at("depot_return_min").get<double>();
      for (const auto& v : jr.at("visits"))
        r.visits.push_back({v.at("request").get<std::string>(), v.at("time_min").get<double>()});
      s.routes.push_back(std::move(r));
    }
    return s;
  });
}

Solution parse_solution(const std::string& text) {
  json doc = guarded("solution", [&] { return json::parse(text); });
  return solution_from_json(doc);
}

ordered_json matrix_to_json(const DistanceMatrix& m) {
  ordered_json doc;
  doc["format_version"] = kFormatVersion;
  doc["labels"] = m.labels();
  ordered_json rows = ordered_json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    ordered_json row = ordered_json::array();
    for (std::size_t j = 0; j < m.size(); ++j) {
      double v = m.at(i, j);
      row.push_back(std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr));
    }
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc;
}

DistanceMatrix matrix_from_rows(const std::vector<std::string>& labels,
                                const std::vector<std::vector<double>>& rows) {
  if (rows.size() != labels.size()) throw ParseError("matrix: row count does not match label count");
  DistanceMatrix m(labels);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != labels.size())
      throw ParseError("matrix: row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      double v = rows[i][j];
      if (!(v >= 0.0)) throw ParseError("matrix: negative or NaN distance at row " + std::to_string(i));
      if (i == j && v != 0.0) throw ParseError("matrix: non-zero diagonal for '" + labels[i] + "'");
      m.set(i, j, v);
    }
  }
  return m;
}

DistanceMatrix matrix_from_json(const json& doc) {
  return guarded("matrix", [&] {
    check_version(doc, "matrix");
    auto labels = doc.at("labels").get<std::vector<std::string>>();
    std::vector<std::vector<double>> rows;
    for (const auto& row : doc.at("rows")) {
      std::vector<double> r;
      for (const auto& v : row) r.push_back(json_distance(v));
      rows.push_back(std::move(r));
    }
    return matrix_from_rows(labels, rows);
  });
}

DistanceMatrix load_matrix_file(const std::string& path) {
  json doc = guarded("matrix", [&] { return json::parse(read_text_file(path)); });
  return matrix_from_json(doc);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace evrp
