#pragma once

// Abstract MILP for the relocation problem over the action graph, with an
// LP-format writer and reader and the mapping between variable assignments
// and routes.
//
// Variables: x_<i>_<j>_<k> (binary, one per arc and worker) followed by
// t_<i>_<k> (continuous, >= 0, one per node and worker); i, j are graph node
// indices and k is the 1-based worker number. Rows carry the id of the
// constraint family they belong to:
//    2  one depot departure per worker
//    3  each request served at most once
//    4  flow conservation
//    5  time propagation along arcs not entering the depot (big-M)
//    6  route duration
//    7  pickup earliest times
//    8  delivery deadlines
//    9  range at pickup
//   10  delivered charge reaches the requirement by its deadline
//   11  same, against a full battery
//   14  worker ordering by operational cost (symmetry breaking)
//   15  global cap on served requests

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "action_graph.hpp"
#include "domain.hpp"

namespace evrp {

enum class VarType { Binary, Continuous };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
};

struct Term {
  std::size_t var = 0;
  double coef = 0.0;
};

struct Row {
  int family = 0;
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
};

struct ModelOptions {
  bool symmetry_breaking = false;
  std::optional<int> upper_bound_cut;
  bool relax_time_windows = false;
  std::optional<double> horizon_override;
  // Replaces the big-M of the time propagation rows; the horizon is used when
  // unset. Diagnostic only.
  std::optional<double> time_big_m;
};

class MilpModel {
 public:
  int workers() const { return workers_; }
  std::size_t node_count() const { return nodes_; }
  std::size_t arc_count() const { return arcs_; }
  double horizon() const { return horizon_; }

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<Term>& objective() const { return objective_; }

  // k is 0-based here.
  std::size_t x_var(std::size_t arc, int k) const { return arc * workers_ + k; }
  std::size_t t_var(std::size_t node, int k) const { return arcs_ * workers_ + node * workers_ + k; }
  std::optional<std::size_t> find_variable(const std::string& name) const;

  std::size_t family_rows(int family) const;

 private:
  friend MilpModel build_milp(const Instance&, const ActionGraph&, const ModelOptions&);

  int workers_ = 1;
  std::size_t nodes_ = 0;
  std::size_t arcs_ = 0;
  double horizon_ = 0.0;
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::vector<Term> objective_;
  std::map<std::string, std::size_t> by_name_;
  std::vector<std::string> node_notes_;

  friend std::string export_lp(const MilpModel&);
};

// K is taken from the instance parameters. Throws ArgumentError for K < 1 or
// a negative upper bound cut.
MilpModel build_milp(const Instance& instance, const ActionGraph& graph, const ModelOptions& options = {});

// CPLEX LP text. Deterministic: the same model always renders to the same bytes.
std::string export_lp(const MilpModel& model);

// Canonical view of an LP file: names, coefficients and bounds. Zero
// coefficients are dropped.
struct LpRow {
  std::string name;
  std::map<std::string, double> terms;
  Sense sense = Sense::LessEqual;
  double rhs = 0.0;
  bool operator==(const LpRow&) const = default;
};

struct LpProblem {
  bool maximize = true;
  std::map<std::string, double> objective;
  std::vector<LpRow> rows;
  std::vector<std::string> binaries;  // sorted
  bool operator==(const LpProblem&) const = default;
};

LpProblem parse_lp(const std::string& text);
LpProblem canonical_lp(const MilpModel& model);

// "name value" per line; blank lines and lines starting with '#' are skipped.
std::map<std::string, double> parse_assignment(const std::string& text);
std::string format_assignment(const MilpModel& model, std::span<const double> values);

// Follows x = 1 arcs from the depot for each worker. Throws ArgumentError for
// non-binary x or broken flow, StructureError for cycles that avoid the depot.
Solution assignment_to_solution(const Instance& instance, const ActionGraph& graph,
                                const std::map<std::string, double>& values);

struct RowViolation {
  std::size_t row = 0;
  double slack = 0.0;  // negative when violated
};

// Rows violated by a full assignment (indexed like model.variables()).
std::vector<RowViolation> evaluate_rows(const MilpModel& model, std::span<const double> values, double tol = 1e-6);

// With every binary fixed, all rows reduce to difference constraints over the
// time variables. Returns time values satisfying them (pinned entries are
// kept) or nullopt when none exist. Values of binaries are taken from
// `values`; continuous entries are overwritten unless pinned.
std::optional<std::vector<double>> complete_times(const MilpModel& model, std::vector<double> values,
                                                  const std::vector<bool>& pinned);

// x from the routes, visited t from the visit times, the rest completed with
// complete_times. nullopt when the model admits no such time assignment.
std::optional<std::vector<double>> assignment_from_solution(const MilpModel& model, const ActionGraph& graph,
                                                            const Solution& solution);

}  // namespace evrp
