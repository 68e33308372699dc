#pragma once

// JSON formats for instances, solutions and distance matrices. Every document
// carries "format_version": 1.

#include <string>
#include <vector>

#include <json.hpp>

#include "distance.hpp"
#include "domain.hpp"

namespace evrp {

inline constexpr int kFormatVersion = 1;

nlohmann::ordered_json instance_to_json(const Instance& instance);
Instance instance_from_json(const nlohmann::json& doc, const std::string& base_dir = {});

std::string dump_instance(const Instance& instance);
Instance parse_instance(const std::string& text, const std::string& base_dir = {});
Instance load_instance_file(const std::string& path);

nlohmann::ordered_json solution_to_json(const Solution& solution);
Solution solution_from_json(const nlohmann::json& doc);
Solution parse_solution(const std::string& text);

// {"format_version":1,"labels":[...],"rows":[[...]]}; unreachable is null.
nlohmann::ordered_json matrix_to_json(const DistanceMatrix& m);
DistanceMatrix matrix_from_json(const nlohmann::json& doc);
DistanceMatrix matrix_from_rows(const std::vector<std::string>& labels,
                                const std::vector<std::vector<double>>& rows);
DistanceMatrix load_matrix_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace evrp
