#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flmc/model.hpp"
#include "flmc/reductions.hpp"
#include "flmc/solvers.hpp"

namespace flmc {

// Fixed-constant splitmix64.  Chosen over std::mt19937 because the stream
// is pinned by these constants alone, so generated fixtures stay
// byte-identical across standard libraries and platforms.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish draw in [0, bound) by modulo.  The slight bias is irrelevant
  // here and the simple form keeps the stream easy to reproduce by hand.
  std::uint64_t below(std::uint64_t bound) { return bound ? next() % bound : 0; }
};

struct ValueCaps {
  Units max_capacity = 5;
  Units max_demand = 5;
  Money max_penalty = 5;
  Money max_opening_cost = 5;
};

struct GenParams {
  Kind kind = Kind::tmc;
  Index num_facilities = 2;
  Index num_clients = 2;
  // Metric sampling places points on the [0, grid]^2 integer lattice and
  // takes L1 distances; general sampling draws unit costs from [0, grid].
  Units grid = 4;
  ValueCaps caps;
  std::uint64_t seed = 0;
};

// Metric instance from lattice points.  Draw order is part of the contract
// (fixtures are frozen against it): facility points, client points, then
// demands, capacities, opening costs, penalties, each in index order and
// each block only when the kind calls for it.  Kinds that must serve
// everyone get the last capacity bumped to cover any demand deficit.
Instance generate_metric_instance(const GenParams& p);

// General-cost instance.  Same contract with the point blocks replaced by a
// row-major draw of the cost matrix.
Instance generate_general_instance(const GenParams& p);

// Feasible but otherwise arbitrary solution, for exercising evaluators and
// translations.  Deterministic given the generator state.
Solution random_feasible_solution(const Instance& inst, SplitMix64& rng);

struct BenchSuite {
  std::string name;
  Kind kind = Kind::tmc;  // tmc or utmc
  CostMode mode = CostMode::metric;
  int count = 10;
  GenParams base;          // seed is the suite seed; instance k uses seed + k
  Index oracle_limit = 8;  // skip the exact oracle above this many clients
  SolverParams params;
};

struct BenchConfig {
  std::vector<BenchSuite> suites;
};

struct BenchRow {
  std::string suite;
  std::uint64_t seed = 0;
  Index num_facilities = 0;
  Index num_clients = 0;
  Money heuristic = 0;   // objective on the reduced instance
  Money translated = 0;  // objective of the translated solution
  std::optional<Money> oracle;
  std::optional<double> ratio;  // translated / oracle where defined
  bool ok = false;              // translation verified and dominance held
  double wall_ms = 0.0;         // reported on stderr only, never serialized
};

struct BenchReport {
  std::vector<BenchRow> rows;
  int failures = 0;
  // First failing instance, serialized, for reproduction.
  std::optional<std::string> failing_instance_json;

  std::optional<double> max_ratio() const;
  std::optional<double> mean_ratio() const;
};

// Runs every suite: generate, reduce, solve heuristically, translate,
// verify, compare against the exact oracle where small enough.  Any
// violated invariant is recorded as a failure rather than thrown, so the
// caller can both report and exit non-zero.
BenchReport bench_run(const BenchConfig& config);

// Fixed-width human-readable table.
std::string bench_table(const BenchReport& report);

// One JSON object per row plus a trailing aggregate object.  Timing fields
// are deliberately absent so repeated runs produce identical bytes.
std::string bench_jsonl(const BenchReport& report);

}  // namespace flmc
