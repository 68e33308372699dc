/* C interface to the electric vehicle relocation solver.
 *
 * Objects are opaque handles released with their *_free function. Every call
 * returns an evrp_status; on failure evrp_last_error() describes the problem
 * for the calling thread. Strings handed out by the library are released with
 * evrp_string_free. Times are minutes, distances km, charges fractions. */
#ifndef EVRP_EVRP_H
#define EVRP_EVRP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EVRP_BUILDING)
#    define EVRP_API __declspec(dllexport)
#  else
#    define EVRP_API __declspec(dllimport)
#  endif
#else
#  define EVRP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evrp_status {
  EVRP_OK = 0,
  EVRP_ERR_ARGUMENT = 1,  /* invalid argument or unknown id */
  EVRP_ERR_PARSE = 2,     /* malformed JSON, CSV or LP text */
  EVRP_ERR_IO = 3,        /* file could not be read or written */
  EVRP_ERR_STRUCTURE = 4, /* inconsistent solution or assignment */
  EVRP_ERR_LIMIT = 5,     /* size limit of an exhaustive method */
  EVRP_ERR_INTERNAL = 6
} evrp_status;

typedef struct evrp_instance evrp_instance;
typedef struct evrp_solution evrp_solution;

typedef enum evrp_method {
  EVRP_METHOD_EXACT = 0,      /* branch and bound */
  EVRP_METHOD_HEURISTIC = 1,  /* one worker at a time */
  EVRP_METHOD_BRUTE_FORCE = 2 /* at most 10 requests */
} evrp_method;

typedef struct evrp_solve_options {
  evrp_method method;
  int symmetry_breaking; /* order routes by operational cost */
  int upper_bound;       /* compute and apply the relaxed bound */
  int warm_start;        /* seed the search with the heuristic */
  double time_limit_s;   /* <= 0: none */
  unsigned threads;      /* 0 or 1: deterministic sequential search */
} evrp_solve_options;

EVRP_API const char* evrp_version(void);
EVRP_API const char* evrp_last_error(void);
EVRP_API void evrp_string_free(char* text);

/* Fills *options with the defaults: exact, no speed-ups, no limit, sequential. */
EVRP_API void evrp_solve_options_init(evrp_solve_options* options);

EVRP_API evrp_status evrp_instance_load(const char* path, evrp_instance** out);
/* base_dir resolves relative distance files; may be NULL. */
EVRP_API evrp_status evrp_instance_from_json(const char* json, const char* base_dir, evrp_instance** out);
/* Random instance on the built-in stations, or on stations_csv ("id,x,y"
 * lines) when it is not NULL. */
EVRP_API evrp_status evrp_instance_generate(int size, uint64_t seed, const char* stations_csv,
                                            evrp_instance** out);
EVRP_API evrp_status evrp_instance_to_json(const evrp_instance* instance, char** out);
EVRP_API evrp_status evrp_instance_set_workers(evrp_instance* instance, int workers);
EVRP_API evrp_status evrp_instance_workers(const evrp_instance* instance, int* out);
EVRP_API evrp_status evrp_instance_request_count(const evrp_instance* instance, size_t* out);
/* Graphviz text of the action graph. */
EVRP_API evrp_status evrp_instance_graph_dot(const evrp_instance* instance, char** out);
/* LP text of the model; symmetry_breaking adds the worker ordering rows and a
 * non-negative upper_bound_cut adds the served cap. */
EVRP_API evrp_status evrp_instance_export_lp(const evrp_instance* instance, int symmetry_breaking,
                                             int upper_bound_cut, char** out);
EVRP_API void evrp_instance_free(evrp_instance* instance);

EVRP_API evrp_status evrp_solve(const evrp_instance* instance, const evrp_solve_options* options,
                                evrp_solution** out);
/* Relaxed bound on the number of served requests. */
EVRP_API evrp_status evrp_upper_bound(const evrp_instance* instance, int* out);

EVRP_API evrp_status evrp_solution_from_json(const char* json, evrp_solution** out);
/* Solution from "name value" lines over the exported model's variables. */
EVRP_API evrp_status evrp_solution_from_assignment(const evrp_instance* instance, const char* assignment,
                                                   evrp_solution** out);
EVRP_API evrp_status evrp_solution_to_json(const evrp_solution* solution, char** out);
EVRP_API evrp_status evrp_solution_served(const evrp_solution* solution, int* out);
/* 1 when the search proved optimality; 0 otherwise or for parsed solutions. */
EVRP_API evrp_status evrp_solution_is_optimal(const evrp_solution* solution, int* out);
EVRP_API void evrp_solution_free(evrp_solution* solution);

/* Evaluates every constraint on the solution. *passed is 1 when none is
 * violated; report (optional) receives the JSON list of rows. */
EVRP_API evrp_status evrp_check(const evrp_instance* instance, const evrp_solution* solution, int* passed,
                                char** report);

/* Generates seeds_count instances per size, solves each with every worker
 * count in both configurations and writes the report ("text", "csv" or
 * "json"). time_limit_s <= 0 means no limit per solve. */
EVRP_API evrp_status evrp_bench(const int* sizes, size_t sizes_count, const uint64_t* seeds, size_t seeds_count,
                                const int* workers, size_t workers_count, const char* format, double time_limit_s,
                                char** out);

#ifdef __cplusplus
}
#endif

#endif
