#include "evrp/evrp.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "action_graph.hpp"
#include "bench.hpp"
#include "distance.hpp"
#include "io.hpp"
#include "milp.hpp"
#include "solver.hpp"

struct evrp_instance {
  evrp::Instance instance;
  evrp::ActionGraph graph;
};

struct evrp_solution {
  evrp::Solution solution;
  bool optimal = false;
};

namespace {

thread_local std::string last_error;

evrp_status fail(evrp_status status, const std::string& message) {
  last_error = message;
  return status;
}

evrp_status status_of(evrp::ErrorKind kind) {
  switch (kind) {
    case evrp::ErrorKind::Argument: return EVRP_ERR_ARGUMENT;
    case evrp::ErrorKind::Parse: return EVRP_ERR_PARSE;
    case evrp::ErrorKind::Structure: return EVRP_ERR_STRUCTURE;
    case evrp::ErrorKind::Io: return EVRP_ERR_IO;
    case evrp::ErrorKind::Limit: return EVRP_ERR_LIMIT;
  }
  return EVRP_ERR_INTERNAL;
}

template <class F>
evrp_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return EVRP_OK;
  } catch (const evrp::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(EVRP_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(EVRP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EVRP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EVRP_ERR_INTERNAL, "unknown error");
  }
}

char* copy_out(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void require(const void* p, const char* what) {
  if (!p) throw evrp::ArgumentError(std::string(what) + " must not be NULL");
}

evrp_instance* wrap(evrp::Instance inst) {
  auto graph = evrp::build_graph(inst, evrp::build_distances(inst));
  return new evrp_instance{std::move(inst), std::move(graph)};
}

}  // namespace

extern "C" {

const char* evrp_version(void) { return "1.0.0"; }

const char* evrp_last_error(void) { return last_error.c_str(); }

void evrp_string_free(char* text) { delete[] text; }

void evrp_solve_options_init(evrp_solve_options* options) {
  if (!options) return;
  *options = evrp_solve_options{};
  options->method = EVRP_METHOD_EXACT;
}

evrp_status evrp_instance_load(const char* path, evrp_instance** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(evrp::load_instance_file(path));
  });
}

evrp_status evrp_instance_from_json(const char* json, const char* base_dir, evrp_instance** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = wrap(evrp::parse_instance(json, base_dir ? base_dir : ""));
  });
}

evrp_status evrp_instance_generate(int size, uint64_t seed, const char* stations_csv, evrp_instance** out) {
  return guarded([&] {
    require(out, "out");
    evrp::GeneratorConfig cfg;
    cfg.size = size;
    cfg.seed = seed;
    if (stations_csv) cfg.stations = evrp::parse_stations_csv(stations_csv);
    *out = wrap(evrp::generate_instance(cfg));
  });
}

evrp_status evrp_instance_to_json(const evrp_instance* instance, char** out) {
  return guarded([&] {
    require(instance, "instance");
    require(out, "out");
    *out = copy_out(evrp::dump_instance(instance->instance));
  });
}

evrp_status evrp_instance_set_workers(evrp_instance* instance, int workers) {
  return guarded([&] {
    require(instance, "instance");
    if (workers < 1) throw evrp::ArgumentError("workers must be at least 1");
    instance->instance.parameters.workers = workers;
  });
}

evrp_status evrp_instance_workers(const evrp_instance* instance, int* out) {
  return guarded([&] {
    require(instance, "instance");
    require(out, "out");
    *out = instance->instance.parameters.workers;
  });
}

evrp_status evrp_instance_request_count(const evrp_instance* instance, size_t* out) {
  return guarded([&] {
    require(instance, "instance");
    require(out, "out");
    *out = instance->instance.requests.size();
  });
}

evrp_status evrp_instance_graph_dot(const evrp_instance* instance, char** out) {
  return guarded([&] {
    require(instance, "instance");
    require(out, "out");
    *out = copy_out(instance->graph.to_dot());
  });
}

evrp_status evrp_instance_export_lp(const evrp_instance* instance, int symmetry_breaking, int upper_bound_cut,
                                    char** out) {
  return guarded([&] {
    require(instance, "instance");
    require(out, "out");
    evrp::ModelOptions opt;
    opt.symmetry_breaking = symmetry_breaking != 0;
    if (upper_bound_cut >= 0) opt.upper_bound_cut = upper_bound_cut;
    *out = copy_out(evrp::export_lp(evrp::build_milp(instance->instance, instance->graph, opt)));
  });
}

void evrp_instance_free(evrp_instance* instance) { delete instance; }

evrp_status evrp_solve(const evrp_instance* instance, const evrp_solve_options* options, evrp_solution** out) {
  return guarded([&] {
    require(instance, "instance");
    require(out, "out");
    evrp_solve_options o;
    evrp_solve_options_init(&o);
    if (options) o = *options;
    const auto& inst = instance->instance;
    const int K = inst.parameters.workers;
    evrp::SolveOptions so;
    so.symmetry_breaking = o.symmetry_breaking != 0;
    so.use_upper_bound = o.upper_bound != 0;
    so.use_warm_start = o.warm_start != 0;
    if (o.time_limit_s > 0) so.time_limit_s = o.time_limit_s;
    so.deterministic = o.threads <= 1;
    so.threads = o.threads;
    auto sol = std::make_unique<evrp_solution>();
    switch (o.method) {
      case EVRP_METHOD_EXACT: {
        auto r = evrp::solve_branch_and_bound(inst, instance->graph, so, K);
        sol->solution = std::move(r.solution);
        sol->optimal = r.optimal;
        break;
      }
      case EVRP_METHOD_HEURISTIC: {
        auto r = evrp::heuristic_sequential(inst, instance->graph, K, so);
        sol->solution = std::move(r.solution);
        break;
      }
      case EVRP_METHOD_BRUTE_FORCE:
        sol->solution = evrp::brute_force(inst, instance->graph, K);
        sol->optimal = true;
        break;
      default: throw evrp::ArgumentError("unknown solve method");
    }
    *out = sol.release();
  });
}

evrp_status evrp_upper_bound(const evrp_instance* instance, int* out) {
  return guarded([&] {
    require(instance, "instance");
    require(out, "out");
    const auto& inst = instance->instance;
    *out = evrp::compute_upper_bound(inst, instance->graph, inst.parameters.workers).value;
  });
}

evrp_status evrp_solution_from_json(const char* json, evrp_solution** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = new evrp_solution{evrp::parse_solution(json), false};
  });
}

evrp_status evrp_solution_from_assignment(const evrp_instance* instance, const char* assignment,
                                          evrp_solution** out) {
  return guarded([&] {
    require(instance, "instance");
    require(assignment, "assignment");
    require(out, "out");
    auto values = evrp::parse_assignment(assignment);
    *out = new evrp_solution{evrp::assignment_to_solution(instance->instance, instance->graph, values), false};
  });
}

evrp_status evrp_solution_to_json(const evrp_solution* solution, char** out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    *out = copy_out(evrp::solution_to_json(solution->solution).dump(2) + "\n");
  });
}

evrp_status evrp_solution_served(const evrp_solution* solution, int* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    *out = evrp::objective_of(solution->solution);
  });
}

evrp_status evrp_solution_is_optimal(const evrp_solution* solution, int* out) {
  return guarded([&] {
    require(solution, "solution");
    require(out, "out");
    *out = solution->optimal ? 1 : 0;
  });
}

void evrp_solution_free(evrp_solution* solution) { delete solution; }

evrp_status evrp_check(const evrp_instance* instance, const evrp_solution* solution, int* passed, char** report) {
  return guarded([&] {
    require(instance, "instance");
    require(solution, "solution");
    require(passed, "passed");
    auto rep = evrp::check_solution(instance->instance, instance->graph, solution->solution);
    *passed = rep.passed() ? 1 : 0;
    if (report) *report = copy_out(rep.to_json().dump(2) + "\n");
  });
}

evrp_status evrp_bench(const int* sizes, size_t sizes_count, const uint64_t* seeds, size_t seeds_count,
                       const int* workers, size_t workers_count, const char* format, double time_limit_s,
                       char** out) {
  return guarded([&] {
    require(out, "out");
    if (!sizes || !sizes_count || !seeds || !seeds_count || !workers || !workers_count)
      throw evrp::ArgumentError("sizes, seeds and workers must be non-empty");
    auto fmt = evrp::parse_report_format(format ? format : "text");
    std::vector<evrp::Instance> instances;
    for (size_t i = 0; i < sizes_count; ++i) {
      for (size_t s = 0; s < seeds_count; ++s) {
        evrp::GeneratorConfig cfg;
        cfg.size = sizes[i];
        cfg.seed = seeds[s];
        instances.push_back(evrp::generate_instance(cfg));
      }
    }
    evrp::ExperimentOptions opt;
    if (time_limit_s > 0) opt.time_limit_s = time_limit_s;
    auto records = evrp::run_experiment(instances, std::vector<int>(workers, workers + workers_count), opt);
    *out = copy_out(evrp::emit_report(records, fmt));
  });
}

}  // extern "C"
