#include <doctest.h>

#include <set>

#include "flmc/harness.hpp"
#include "flmc/io.hpp"
#include "flmc/solvers.hpp"
#include "test_support.hpp"

using namespace flmc;

TEST_CASE("splitmix64 produces the published stream") {
  SplitMix64 rng(0);
  // First output of the reference implementation seeded with zero.
  CHECK(rng.next() == 16294208416658607535ULL);

  SplitMix64 a(123456789), b(123456789);
  for (int k = 0; k < 64; ++k) CHECK(a.next() == b.next());

  SplitMix64 c(7);
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 200; ++k) {
    const std::uint64_t v = c.below(5);
    CHECK(v < 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);  // every residue shows up quickly
  CHECK(SplitMix64(9).below(0) == 0);
}

TEST_CASE("generate_metric_instance honors its contract") {
  for (Kind kind : {Kind::tmc, Kind::cfl, Kind::ufl, Kind::utmc, Kind::cflmc}) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
      GenParams params;
      params.kind = kind;
      params.num_facilities = 1 + static_cast<Index>(seed % 3);
      params.num_clients = 1 + static_cast<Index>(seed % 4);
      params.seed = seed;
      const Instance inst = generate_metric_instance(params);
      CHECK(inst.kind == kind);
      CHECK(inst.num_facilities() == params.num_facilities);
      CHECK(inst.num_clients() == params.num_clients);
      CHECK(inst.metric_claim);
      CHECK(check_metric(inst.costs));
      CHECK(validate_instance(inst).ok());
      CHECK(inst.costs.maxCoeff() <= 2 * params.grid);  // L1 reach of the lattice
      CHECK(inst.demands.maxCoeff() <= params.caps.max_demand);
      if (kind_has_opening_costs(kind)) {
        CHECK(inst.opening_costs.maxCoeff() <= params.caps.max_opening_cost);
        CHECK(feasible_cfl(inst));  // serve-all kinds must be solvable
      }
      if (kind_has_penalties(kind)) {
        CHECK(inst.penalties.maxCoeff() <= params.caps.max_penalty);
      }

      // Same parameters, same bytes.
      CHECK(instance_to_json(generate_metric_instance(params)) == instance_to_json(inst));
    }
  }
}

TEST_CASE("generate_general_instance draws flat costs") {
  GenParams params;
  params.kind = Kind::tmc;
  params.num_facilities = 3;
  params.num_clients = 3;
  params.grid = 4;
  params.seed = 5;
  const Instance inst = generate_general_instance(params);
  CHECK_FALSE(inst.metric_claim);
  CHECK(inst.costs.maxCoeff() <= params.grid);
  CHECK(validate_instance(inst).ok());
  CHECK(instance_to_json(generate_general_instance(params)) == instance_to_json(inst));

  params.seed = 6;
  CHECK(instance_to_json(generate_general_instance(params)) != instance_to_json(inst));
}

TEST_CASE("generators reject impossible shapes") {
  GenParams params;
  params.kind = Kind::cfl;
  params.num_facilities = 0;
  params.num_clients = 1;
  params.caps.max_demand = 3;
  // A serve-all kind with clients but nowhere to put them has no instances;
  // the generator refuses rather than looping on the capacity bump.
  bool threw = false;
  for (std::uint64_t seed = 0; seed < 20 && !threw; ++seed) {
    params.seed = seed;
    try {
      const Instance inst = generate_metric_instance(params);
      CHECK(inst.total_demand() == 0);  // only the all-zero draw survives
    } catch (const std::invalid_argument&) {
      threw = true;
    }
  }
  CHECK(threw);
}

TEST_CASE("random_feasible_solution is feasible across kinds and seeds") {
  SplitMix64 seeds(77);
  int with_unserved = 0, with_flows = 0;
  for (Kind kind : {Kind::tmc, Kind::cfl, Kind::ufl, Kind::utmc, Kind::cflmc}) {
    for (int k = 0; k < 20; ++k) {
      GenParams params;
      params.kind = kind;
      params.num_facilities = 1 + static_cast<Index>(seeds.below(3));
      params.num_clients = 1 + static_cast<Index>(seeds.below(3));
      params.seed = seeds.next();
      const Instance inst = generate_metric_instance(params);
      SplitMix64 rng(seeds.next());
      const Solution sol = random_feasible_solution(inst, rng);
      CHECK(verify_solution(inst, sol).ok());
      if (!sol.unserved.empty()) ++with_unserved;
      if (!sol.flows.empty()) ++with_flows;
    }
  }
  // Not a fixed split, but both shapes must occur somewhere in 100 draws.
  CHECK(with_unserved > 0);
  CHECK(with_flows > 0);
}

TEST_CASE("bench_run checks every row and serializes without timings") {
  BenchSuite suite;
  suite.name = "smoke";
  suite.kind = Kind::tmc;
  suite.mode = CostMode::metric;
  suite.count = 6;
  suite.base.kind = Kind::tmc;
  suite.base.num_facilities = 2;
  suite.base.num_clients = 2;
  suite.base.seed = 3;
  suite.oracle_limit = 8;

  BenchSuite uncap = suite;
  uncap.name = "smoke-uncap";
  uncap.kind = Kind::utmc;
  uncap.base.kind = Kind::utmc;

  BenchConfig config;
  config.suites = {suite, uncap};

  const BenchReport report = bench_run(config);
  REQUIRE(report.rows.size() == 12);
  CHECK(report.failures == 0);
  CHECK_FALSE(report.failing_instance_json.has_value());
  for (const BenchRow& row : report.rows) {
    CHECK(row.ok);
    CHECK(row.translated <= row.heuristic);
    REQUIRE(row.oracle.has_value());  // two clients is well under the limit
    CHECK(row.translated >= *row.oracle);
    if (row.ratio) CHECK(*row.ratio >= 1.0);
  }
  REQUIRE(report.max_ratio().has_value());
  CHECK(*report.max_ratio() >= 1.0);

  const std::string table = bench_table(report);
  CHECK(table.find("smoke") != std::string::npos);
  CHECK(table.find("suite") != std::string::npos);

  const std::string jsonl = bench_jsonl(report);
  CHECK(jsonl.find("wall") == std::string::npos);
  CHECK(jsonl.find("ms") == std::string::npos);
  CHECK(jsonl == bench_jsonl(bench_run(config)));  // byte-stable reruns

  // 12 row objects plus the aggregate line.
  size_t lines = 0;
  for (char ch : jsonl) {
    if (ch == '\n') ++lines;
  }
  CHECK(lines == 13);
}

TEST_CASE("bench_run skips the oracle above its client limit") {
  BenchSuite suite;
  suite.name = "capped";
  suite.kind = Kind::tmc;
  suite.count = 2;
  suite.base.num_facilities = 2;
  suite.base.num_clients = 3;
  suite.base.seed = 9;
  suite.oracle_limit = 2;
  BenchConfig config;
  config.suites = {suite};
  const BenchReport report = bench_run(config);
  REQUIRE(report.rows.size() == 2);
  for (const BenchRow& row : report.rows) {
    CHECK(row.ok);
    CHECK_FALSE(row.oracle.has_value());
    CHECK_FALSE(row.ratio.has_value());
  }
  CHECK_FALSE(report.max_ratio().has_value());
}
