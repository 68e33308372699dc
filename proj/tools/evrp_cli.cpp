// Command-line front end; everything goes through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evrp/evrp.h"

namespace {

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInvalid = 2;  // infeasible solution or unreadable input

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& m) : std::runtime_error(m), code(c) {}
};

void check(evrp_status st) {
  if (st == EVRP_OK) return;
  const int code = st == EVRP_ERR_PARSE || st == EVRP_ERR_STRUCTURE ? kInvalid : kFailure;
  throw CliError(code, evrp_last_error());
}

// Owns a string returned by the library.
struct Text {
  char* p = nullptr;
  ~Text() { evrp_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Inst {
  evrp_instance* p = nullptr;
  ~Inst() { evrp_instance_free(p); }
};

struct Sol {
  evrp_solution* p = nullptr;
  ~Sol() { evrp_solution_free(p); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kFailure, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!(out << text)) throw CliError(kFailure, "cannot write " + path);
}

void load(const std::string& path, Inst& inst, int workers) {
  check(evrp_instance_load(path.c_str(), &inst.p));
  if (workers > 0) check(evrp_instance_set_workers(inst.p, workers));
}

// "3", "1-5" and lists of both.
std::vector<uint64_t> expand_seeds(const std::vector<std::string>& specs) {
  std::vector<uint64_t> out;
  for (const auto& s : specs) {
    auto dash = s.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(s));
      } else {
        auto a = std::stoull(s.substr(0, dash)), b = std::stoull(s.substr(dash + 1));
        if (a > b) throw std::invalid_argument("range");
        for (auto v = a; v <= b; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw CliError(kInvalid, "bad seed '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electric vehicle relocation: instances, exact and heuristic solving, LP export, benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(evrp_version()));

  auto* gen = app.add_subcommand("generate", "write a random instance");
  int size = 10;
  uint64_t seed = 1;
  std::string out_path, stations_file;
  int gen_workers = 1;
  gen->add_option("--size", size, "total requests (even)")->capture_default_str();
  gen->add_option("--seed", seed, "random seed")->capture_default_str();
  gen->add_option("--workers", gen_workers, "workers stored in the instance")->capture_default_str();
  gen->add_option("--stations-file", stations_file, "CSV of id,x_km,y_km");
  gen->add_option("--out", out_path, "output file (stdout when omitted)");

  auto* solve = app.add_subcommand("solve", "solve an instance");
  std::string instance_path;
  int workers = 0;
  bool exact = false, heuristic = false, brute = false, symmetry = false, upper = false, warm = false;
  double time_limit = 0;
  unsigned threads = 1;
  solve->add_option("--instance", instance_path, "instance JSON")->required();
  solve->add_option("--workers", workers, "number of workers (instance value when omitted)");
  auto* ex = solve->add_flag("--exact", exact, "branch and bound (default)");
  auto* he = solve->add_flag("--heuristic", heuristic, "route one worker at a time");
  auto* bf = solve->add_flag("--brute-force", brute, "exhaustive enumeration, at most 10 requests");
  ex->excludes(he)->excludes(bf);
  he->excludes(bf);
  solve->add_flag("--symmetry-breaking", symmetry, "order worker routes by operational cost");
  solve->add_flag("--upper-bound", upper, "compute the relaxed bound and cap the search with it");
  solve->add_flag("--warm-start", warm, "start from the heuristic solution");
  solve->add_option("--time-limit", time_limit, "seconds; the result is not proven optimal when reached");
  solve->add_option("--threads", threads, "parallel search threads (1 = deterministic)")->capture_default_str();
  solve->add_option("--out", out_path, "solution JSON (stdout when omitted)");

  auto* lp = app.add_subcommand("export-lp", "write the MILP in LP format");
  bool lp_symmetry = false;
  int lp_cut = -1;
  lp->add_option("--instance", instance_path, "instance JSON")->required();
  lp->add_option("--workers", workers, "number of workers");
  lp->add_flag("--symmetry-breaking", lp_symmetry, "add the worker ordering rows");
  lp->add_option("--upper-bound-cut", lp_cut, "add a cap on served requests");
  lp->add_option("--out", out_path, "LP file (stdout when omitted)");

  auto* chk = app.add_subcommand("check", "evaluate every constraint on a solution");
  std::string solution_path, report_path;
  chk->add_option("--instance", instance_path, "instance JSON")->required();
  chk->add_option("--solution", solution_path, "solution JSON")->required();
  chk->add_option("--workers", workers, "number of workers");
  chk->add_option("--report", report_path, "write the row-by-row JSON report here");

  auto* bench = app.add_subcommand("bench", "generate, solve and tabulate");
  std::vector<int> sizes{10, 20};
  std::vector<std::string> seed_specs{"1-5"};
  std::vector<int> bench_workers{1, 2, 3};
  std::string format = "text";
  double bench_limit = 0;
  bench->add_option("--sizes", sizes, "request totals")->capture_default_str();
  bench->add_option("--seeds", seed_specs, "seeds, e.g. 1-5 or 1 7 9")->capture_default_str();
  bench->add_option("--workers", bench_workers, "worker counts")->capture_default_str();
  bench->add_option("--report-format", format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();
  bench->add_option("--time-limit", bench_limit, "seconds per solve");
  bench->add_option("--out", out_path, "report file (stdout when omitted)");

  auto* graph = app.add_subcommand("graph", "write the action graph in Graphviz format");
  graph->add_option("--instance", instance_path, "instance JSON")->required();
  graph->add_option("--out", out_path, "DOT file (stdout when omitted)");

  auto* imp = app.add_subcommand("import-assignment", "turn an MILP variable assignment into a solution");
  std::string assignment_path;
  imp->add_option("--instance", instance_path, "instance JSON")->required();
  imp->add_option("--assignment", assignment_path, "lines of 'variable value'")->required();
  imp->add_option("--workers", workers, "number of workers");
  imp->add_option("--out", out_path, "solution JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (gen->parsed()) {
      Inst inst;
      std::string csv;
      if (!stations_file.empty()) csv = read_file(stations_file);
      check(evrp_instance_generate(size, seed, stations_file.empty() ? nullptr : csv.c_str(), &inst.p));
      check(evrp_instance_set_workers(inst.p, gen_workers));
      Text t;
      check(evrp_instance_to_json(inst.p, &t.p));
      write_out(out_path, t.str());
    } else if (solve->parsed()) {
      Inst inst;
      load(instance_path, inst, workers);
      evrp_solve_options opt;
      evrp_solve_options_init(&opt);
      opt.method = heuristic ? EVRP_METHOD_HEURISTIC : brute ? EVRP_METHOD_BRUTE_FORCE : EVRP_METHOD_EXACT;
      opt.symmetry_breaking = symmetry;
      opt.upper_bound = upper;
      opt.warm_start = warm;
      opt.time_limit_s = time_limit;
      opt.threads = threads;
      Sol sol;
      check(evrp_solve(inst.p, &opt, &sol.p));
      int served = 0, optimal = 0, passed = 0;
      size_t total = 0;
      check(evrp_solution_served(sol.p, &served));
      check(evrp_solution_is_optimal(sol.p, &optimal));
      check(evrp_instance_request_count(inst.p, &total));
      check(evrp_check(inst.p, sol.p, &passed, nullptr));
      Text t;
      check(evrp_solution_to_json(sol.p, &t.p));
      write_out(out_path, t.str());
      std::cerr << "served " << served << " of " << total << (optimal ? " (optimal)" : "") << '\n';
      if (!passed) throw CliError(kInvalid, "solution violates constraints");
    } else if (lp->parsed()) {
      Inst inst;
      load(instance_path, inst, workers);
      Text t;
      check(evrp_instance_export_lp(inst.p, lp_symmetry, lp_cut, &t.p));
      write_out(out_path, t.str());
    } else if (chk->parsed()) {
      Inst inst;
      load(instance_path, inst, workers);
      Sol sol;
      check(evrp_solution_from_json(read_file(solution_path).c_str(), &sol.p));
      int passed = 0;
      Text rep;
      check(evrp_check(inst.p, sol.p, &passed, &rep.p));
      if (!report_path.empty()) write_out(report_path, rep.str());
      int served = 0;
      check(evrp_solution_served(sol.p, &served));
      std::cout << (passed ? "feasible" : "infeasible") << ", served " << served << '\n';
      if (!passed) {
        // Name the violated rows.
        std::istringstream in(rep.str());
        std::string line, row;
        while (std::getline(in, line)) {
          if (line.find("\"row\"") != std::string::npos) row = line;
          if (line.find("\"satisfied\": false") != std::string::npos) std::cout << "  violated" << row << '\n';
        }
        return kInvalid;
      }
    } else if (bench->parsed()) {
      auto seeds = expand_seeds(seed_specs);
      Text t;
      check(evrp_bench(sizes.data(), sizes.size(), seeds.data(), seeds.size(), bench_workers.data(),
                       bench_workers.size(), format.c_str(), bench_limit, &t.p));
      write_out(out_path, t.str());
    } else if (graph->parsed()) {
      Inst inst;
      load(instance_path, inst, 0);
      Text t;
      check(evrp_instance_graph_dot(inst.p, &t.p));
      write_out(out_path, t.str());
    } else if (imp->parsed()) {
      Inst inst;
      load(instance_path, inst, workers);
      Sol sol;
      check(evrp_solution_from_assignment(inst.p, read_file(assignment_path).c_str(), &sol.p));
      Text t;
      check(evrp_solution_to_json(sol.p, &t.p));
      write_out(out_path, t.str());
    }
  } catch (const CliError& e) {
    std::cerr << "evrp: " << e.what() << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "evrp: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
