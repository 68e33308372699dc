#pragma once
// Random instance generation, solver experiments and tabular reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "domain.hpp"

namespace evrp {

struct Station {
  std::string id;
  Coordinates at;
};

// Nine stations a few km apart around a central depot.
std::vector<Station> default_stations();

// "id,x_km,y_km" per line; a header line is allowed.
std::vector<Station> parse_stations_csv(const std::string& text);

struct GeneratorConfig {
  std::vector<Station> stations = default_stations();
  Coordinates depot{0.0, 0.0};
  int size = 10;  // total requests, even
  double window_open_min = 480.0;
  double window_close_min = 900.0;
  double pickup_charge_min = 0.1;
  double pickup_charge_max = 1.0;
  double delivery_charge_min = 0.2;
  double delivery_charge_max = 0.9;
  double detour_factor = 1.3;
  std::uint64_t seed = 1;
  Parameters parameters;

  void validate() const;
};

// Stations are drawn with replacement; times are whole minutes in the window
// and charges have two decimals. Requests are p01.., d01...
Instance generate_instance(const GeneratorConfig& config);

struct ExperimentOptions {
  std::optional<double> time_limit_s;  // per solve
  unsigned threads = 1;                // concurrent (instance, K) cells
};

struct ExperimentRecord {
  std::string instance;
  int requests = 0;
  int workers = 0;
  int served_baseline = 0;
  int served_speedup = 0;
  double cpu1_s = 0.0;  // plain search
  double cpu2_s = 0.0;  // symmetry breaking, bound cut and warm start, bound and warm start time included
  bool optimal_baseline = false;
  bool optimal_speedup = false;
  int upper_bound = -1;

  // Percentage of requests served by the best of the two runs; 100 for an
  // empty instance.
  double served_pct() const;
  // (CPU1 - CPU2) / CPU1 * 100, or 0 when CPU1 is 0.
  double improvement_pct() const;
  bool operator==(const ExperimentRecord&) const = default;
};

std::vector<ExperimentRecord> run_experiment(const std::vector<Instance>& instances, const std::vector<int>& workers,
                                             const ExperimentOptions& options = {});

enum class ReportFormat { Text, Csv, Json };
ReportFormat parse_report_format(const std::string& name);

struct SizeAverage {
  int requests = 0;
  int workers = 0;
  std::size_t count = 0;
  double served_pct = 0.0;
  double cpu1_s = 0.0;
  double cpu2_s = 0.0;
  // Relative change between the average CPU1 and the average CPU2.
  double improvement_pct = 0.0;
};

std::vector<SizeAverage> size_averages(const std::vector<ExperimentRecord>& records);

// Text: one row per instance with Served/CPU1/CPU2 per K, then one row per
// request count with the averages and Improv. CSV: one line per record. JSON:
// records and averages. Throws ArgumentError for no records.
std::string emit_report(const std::vector<ExperimentRecord>& records, ReportFormat format);

std::vector<ExperimentRecord> parse_csv_records(const std::string& csv);

}  // namespace evrp
