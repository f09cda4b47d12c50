// Acceptance gate: one self-contained check per release criterion, one
// PASS/FAIL line each, non-zero exit if anything fails.  The checks lean on
// the brute-force oracles from test_support.hpp, never on the code under
// test, so a regression in the library cannot hide itself.
//
// Usage: flmc_acceptance <path-to-flmc-cli>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "flmc/harness.hpp"
#include "flmc/io.hpp"
#include "flmc/reductions.hpp"
#include "flmc/solvers.hpp"
#include "flmc/transport.hpp"
#include "test_support.hpp"

using namespace flmc;

namespace {

int g_failures = 0;

void criterion(int number, const char* name, const std::function<std::string()>& body) {
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  std::printf("%s %2d  %s%s%s\n", ok ? "PASS" : "FAIL", number, name,
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

[[noreturn]] void fail(const std::string& message) { throw std::runtime_error(message); }

// Small-instance corpus with every drawn value at most `cap`.  Serve-all
// kinds sometimes get a capacity lifted above the cap to stay feasible;
// those draws are skipped so the corpus honors the value bound exactly.
std::vector<Instance> corpus(Kind kind, CostMode mode, int want, std::uint64_t stream_seed,
                             Units cap) {
  std::vector<Instance> out;
  SplitMix64 seeds(stream_seed);
  while (static_cast<int>(out.size()) < want) {
    GenParams p;
    p.kind = kind;
    p.num_facilities = 1 + static_cast<Index>(seeds.below(3));
    p.num_clients = 1 + static_cast<Index>(seeds.below(3));
    // Lattice distances reach twice the grid; a flat draw reaches the grid.
    p.grid = mode == CostMode::metric ? (cap / 2) : cap;
    p.caps.max_capacity = cap;
    p.caps.max_demand = cap;
    p.caps.max_penalty = cap;
    p.caps.max_opening_cost = cap;
    p.seed = seeds.next();
    Instance inst =
        mode == CostMode::metric ? generate_metric_instance(p) : generate_general_instance(p);
    if (!kind_is_uncapacitated(kind) && inst.capacities.size() > 0 &&
        inst.capacities.maxCoeff() > cap) {
      continue;
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::string check_optimum_preserved(Kind kind, bool metric_mode, bool general_mode,
                                    std::uint64_t seed) {
  int checked = 0;
  std::vector<CostMode> modes;
  if (metric_mode) modes.push_back(CostMode::metric);
  if (general_mode) modes.push_back(CostMode::general);
  for (CostMode mode : modes) {
    for (const Instance& inst : corpus(kind, mode, 200, seed + checked, 5)) {
      Money source = 0, target = 0;
      switch (kind) {
        case Kind::tmc:
          source = exact_tmc(inst).objective;
          target = exact_cfl(tmc_to_cfl(inst, mode).instance).objective;
          break;
        case Kind::cfl:
          source = exact_cfl(inst).objective;
          target = exact_tmc(cfl_to_tmc(inst, mode).instance).objective;
          break;
        case Kind::utmc:
          source = exact_tmc(inst).objective;
          target = exact_cfl(utmc_to_ufl(inst).instance).objective;
          break;
        case Kind::cflmc:
          source = exact_cflmc(inst).objective;
          target = exact_cfl(cflmc_to_cfl(inst, mode).instance).objective;
          break;
        default: fail("unexpected corpus kind");
      }
      if (source != target) {
        fail("optimum changed (" + std::to_string(source) + " vs " + std::to_string(target) +
             ") on: " + instance_to_json(inst));
      }
      ++checked;
    }
  }
  std::ostringstream detail;
  detail << checked << " instances (" << (modes.size() == 2 ? "metric+general" : "metric")
         << "), exact equality";
  return detail.str();
}

Reduction reduce_any(const Instance& inst, CostMode mode, ReductionDirection dir) {
  switch (dir) {
    case ReductionDirection::tmc_to_cfl: return tmc_to_cfl(inst, mode);
    case ReductionDirection::cfl_to_tmc: return cfl_to_tmc(inst, mode);
    case ReductionDirection::utmc_to_ufl: return utmc_to_ufl(inst);
    case ReductionDirection::cflmc_to_cfl: return cflmc_to_cfl(inst, mode);
  }
  fail("unexpected direction");
}

Kind source_kind(ReductionDirection dir) {
  switch (dir) {
    case ReductionDirection::tmc_to_cfl: return Kind::tmc;
    case ReductionDirection::cfl_to_tmc: return Kind::cfl;
    case ReductionDirection::utmc_to_ufl: return Kind::utmc;
    case ReductionDirection::cflmc_to_cfl: return Kind::cflmc;
  }
  fail("unexpected direction");
}

constexpr ReductionDirection kAllDirections[] = {
    ReductionDirection::tmc_to_cfl,
    ReductionDirection::cfl_to_tmc,
    ReductionDirection::utmc_to_ufl,
    ReductionDirection::cflmc_to_cfl,
};

std::string check_translation_dominance() {
  int translated = 0;
  for (ReductionDirection dir : kAllDirections) {
    const CostMode mode = CostMode::metric;
    int done = 0;
    for (const Instance& inst : corpus(source_kind(dir), mode, 25, 900 + translated, 5)) {
      const Reduction red = reduce_any(inst, mode, dir);
      SplitMix64 rng(4000 + static_cast<std::uint64_t>(done));
      for (int s = 0; s < 4; ++s) {
        const Solution sol = random_feasible_solution(red.instance, rng);
        const Solution back = translate_solution(red.certificate, red.instance, sol);
        const EvalResult res = evaluate(inst, back);
        if (!res.ok()) {
          fail(std::string(direction_name(dir)) +
               " translation infeasible: " + res.report.to_string());
        }
        if (res.value != back.objective || res.value > sol.objective) {
          fail(std::string(direction_name(dir)) + " translation rose from " +
               std::to_string(sol.objective) + " to " + std::to_string(res.value) +
               " on: " + instance_to_json(inst));
        }
        ++translated;
      }
      ++done;
    }
  }
  return std::to_string(translated) + " random solutions across all four directions, "
         "back-translation never cost more";
}

std::string check_normalization_conserves() {
  int normalized = 0;
  for (ReductionDirection dir : {ReductionDirection::tmc_to_cfl,
                                 ReductionDirection::utmc_to_ufl,
                                 ReductionDirection::cflmc_to_cfl}) {
    int done = 0;
    for (const Instance& inst : corpus(source_kind(dir), CostMode::metric, 25,
                                       1300 + normalized, 5)) {
      const Reduction red = reduce_any(inst, CostMode::metric, dir);
      const Index m = red.instance.num_facilities();
      const Index n = red.instance.num_clients();
      SplitMix64 rng(5000 + static_cast<std::uint64_t>(done));
      for (int s = 0; s < 4; ++s) {
        const Solution sol = random_feasible_solution(red.instance, rng);
        const Solution norm = normalize_dummy_service(red.instance, sol, red.certificate);
        const FlowMatrix before = flows_to_matrix(m, n, sol.flows);
        const FlowMatrix after = flows_to_matrix(m, n, norm.flows);
        if (before.rowwise().sum() != after.rowwise().sum() ||
            before.colwise().sum() != after.colwise().sum()) {
          fail(std::string(direction_name(dir)) + " normalization moved totals on: " +
               instance_to_json(inst));
        }
        if (norm.objective > sol.objective) {
          fail(std::string(direction_name(dir)) + " normalization rose from " +
               std::to_string(sol.objective) + " to " + std::to_string(norm.objective));
        }
        ++normalized;
      }
      ++done;
    }
  }
  return std::to_string(normalized) +
         " random solutions, shipped/received totals conserved, objective never rose";
}

std::string check_upper_bound_strict() {
  int instances = 0;
  long long solutions = 0;
  for (int half = 0; half < 2; ++half) {
    const CostMode mode = half == 0 ? CostMode::metric : CostMode::general;
    for (const Instance& inst : corpus(Kind::cfl, mode, 50, 1700 + half, 4)) {
      const Money bound = instance_upper_bound(inst);
      const Index m = inst.num_facilities();
      // Exhaustive: every open set, and within it every integer routing,
      // via the enumerating oracle's maximum.
      for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        Money opening = 0;
        UnitsVector supplies = UnitsVector::Zero(m);
        for (Index i = 0; i < m; ++i) {
          if (mask >> i & 1u) {
            supplies(i) = inst.capacities(i);
            opening += inst.opening_costs(i);
          }
        }
        const auto dearest =
            testsupport::oracle_max_transport(supplies, inst.demands, inst.costs);
        if (!dearest) continue;  // this open set cannot serve everyone
        ++solutions;
        if (opening + *dearest >= bound) {
          fail("feasible objective " + std::to_string(opening + *dearest) +
               " reached the bound " + std::to_string(bound) + " on: " + instance_to_json(inst));
        }
      }
      ++instances;
    }
  }
  return std::to_string(instances) + " instances, every feasible open set's dearest routing "
         "stayed below the bound (" + std::to_string(solutions) + " open sets)";
}

std::string check_transport_exact() {
  SplitMix64 rng(2300);
  int cases = 0, feasible = 0;
  while (cases < 600) {
    const Index m = 1 + static_cast<Index>(rng.below(3));
    const Index n = 1 + static_cast<Index>(rng.below(3));
    UnitsVector supplies(m), demands(n);
    CostMatrix costs(m, n);
    for (Index i = 0; i < m; ++i) supplies(i) = static_cast<Units>(rng.below(5));
    for (Index j = 0; j < n; ++j) demands(j) = static_cast<Units>(rng.below(5));
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) costs(i, j) = static_cast<Money>(rng.below(5));
    }
    const auto oracle = testsupport::oracle_min_transport(supplies, demands, costs);
    const TransportResult got = min_cost_transport(supplies, demands, costs);
    if (got.feasible != oracle.has_value()) fail("feasibility disagreement");
    if (oracle) {
      ++feasible;
      if (got.total_cost != *oracle) {
        fail("cost " + std::to_string(got.total_cost) + " vs enumerated " +
             std::to_string(*oracle));
      }
    }
    ++cases;
  }
  return std::to_string(cases) + " enumerated cases (" + std::to_string(feasible) +
         " feasible), exact agreement";
}

std::string check_cost_shape_preserved() {
  int metric_checked = 0, general_checked = 0;
  for (ReductionDirection dir : kAllDirections) {
    for (const Instance& inst :
         corpus(source_kind(dir), CostMode::metric, 100, 2900 + metric_checked, 5)) {
      const Reduction red = reduce_any(inst, CostMode::metric, dir);
      if (!red.instance.metric_claim || !check_metric(red.instance.costs)) {
        fail(std::string(direction_name(dir)) + " metric output failed the four-point check");
      }
      ++metric_checked;
    }
    if (dir == ReductionDirection::utmc_to_ufl) continue;  // metric-only gadget
    for (const Instance& inst :
         corpus(source_kind(dir), CostMode::general, 100, 3300 + general_checked, 5)) {
      const Reduction red = reduce_any(inst, CostMode::general, dir);
      if (red.instance.costs.maxCoeff() != inst.costs.maxCoeff()) {
        fail(std::string(direction_name(dir)) + " general output changed the dearest unit cost");
      }
      const bool dummy_facilities = dir != ReductionDirection::cfl_to_tmc;
      if (dummy_facilities && red.instance.num_clients() != inst.num_clients()) {
        fail(std::string(direction_name(dir)) + " changed the client count");
      }
      if (!dummy_facilities && red.instance.num_facilities() != inst.num_facilities()) {
        fail(std::string(direction_name(dir)) + " changed the facility count");
      }
      ++general_checked;
    }
  }
  return std::to_string(metric_checked) + " metric reductions all four-point-clean, " +
         std::to_string(general_checked) + " general reductions kept cost cap and shape";
}

std::string check_pipeline_sound() {
  int runs = 0;
  double worst = 0.0, worst_metric = 0.0;
  for (Kind kind : {Kind::tmc, Kind::utmc}) {
    for (int half = 0; half < 2; ++half) {
      const CostMode mode = half == 0 ? CostMode::metric : CostMode::general;
      for (const Instance& inst : corpus(kind, mode, 50, 3700 + runs, 5)) {
        const Solution sol = approx_tmc_pipeline(inst, mode);
        const ValidationReport report = verify_solution(inst, sol);
        if (!report.ok()) {
          fail("pipeline output infeasible: " + report.to_string() +
               " on: " + instance_to_json(inst));
        }
        const Money opt = exact_tmc(inst).objective;
        if (sol.objective < opt) {
          fail("pipeline beat the optimum, which is impossible: " + instance_to_json(inst));
        }
        double ratio = 1.0;
        if (opt > 0) {
          ratio = static_cast<double>(sol.objective) / static_cast<double>(opt);
        } else if (sol.objective > 0) {
          fail("pipeline paid " + std::to_string(sol.objective) +
               " on a free instance: " + instance_to_json(inst));
        }
        worst = std::max(worst, ratio);
        if (mode == CostMode::metric) worst_metric = std::max(worst_metric, ratio);
        ++runs;
      }
    }
  }
  std::ostringstream detail;
  detail.setf(std::ios::fixed);
  detail.precision(3);
  detail << runs << " instances verified, ratio >= 1 throughout, max ratio " << worst
         << " overall / " << worst_metric << " on the metric half";
  return detail.str();
}

// ---- CLI determinism ------------------------------------------------------

std::string quoted(const std::string& s) { return "\"" + s + "\""; }

void run_cli(const std::string& command) {
  const int status = std::system((command + " > /dev/null 2>&1").c_str());
  if (status != 0) fail("command failed: " + command);
}

void expect_same_bytes(const std::string& a, const std::string& b) {
  if (read_file(a) != read_file(b)) fail("outputs differ: " + a + " vs " + b);
}

std::string check_cli_deterministic(const std::string& cli) {
  namespace fs = std::filesystem;
  const fs::path dir = "acceptance_scratch";
  fs::create_directories(dir);
  const auto at = [&](const std::string& name) { return (dir / name).string(); };

  const std::string bench_config = R"({
  "suites": [{
    "name": "determinism", "kind": "tmc", "mode": "metric", "count": 5,
    "facilities": 3, "clients": 3, "grid": 4,
    "max_capacity": 5, "max_demand": 4, "max_penalty": 6,
    "seed": 2026, "oracle_limit": 8, "max_iterations": 200
  }]
}
)";
  write_file(at("bench_config.json"), bench_config);

  for (const char* tag : {"a", "b"}) {
    const std::string t = tag;
    run_cli(quoted(cli) + " generate --kind tmc --mode metric --facilities 3 --clients 3" +
            " --seed 97 --out " + at("gen_" + t + ".json"));
    run_cli(quoted(cli) + " reduce " + at("gen_a.json") + " --mode metric --out-instance " +
            at("red_" + t + ".json") + " --out-cert " + at("cert_" + t + ".json"));
    run_cli(quoted(cli) + " solve " + at("red_a.json") + " --solver local-search --out " +
            at("sol_" + t + ".json"));
    run_cli(quoted(cli) + " solve " + at("gen_a.json") + " --solver exact --out " +
            at("opt_" + t + ".json"));
    run_cli(quoted(cli) + " bench --config " + at("bench_config.json") + " --out " +
            at("bench_" + t + ".jsonl"));
  }
  expect_same_bytes(at("gen_a.json"), at("gen_b.json"));
  expect_same_bytes(at("red_a.json"), at("red_b.json"));
  expect_same_bytes(at("cert_a.json"), at("cert_b.json"));
  expect_same_bytes(at("sol_a.json"), at("sol_b.json"));
  expect_same_bytes(at("opt_a.json"), at("opt_b.json"));
  expect_same_bytes(at("bench_a.jsonl"), at("bench_b.jsonl"));
  return "generate/reduce/solve/bench all byte-identical on repeat runs";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-flmc-cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];

  criterion(1, "tmc->cfl keeps the exact optimum",
            [] { return check_optimum_preserved(Kind::tmc, true, true, 100); });
  criterion(2, "cfl->tmc keeps the exact optimum",
            [] { return check_optimum_preserved(Kind::cfl, true, true, 200); });
  criterion(3, "utmc->ufl and cflmc->cfl keep the exact optimum", [] {
    const std::string a = check_optimum_preserved(Kind::utmc, true, false, 300);
    const std::string b = check_optimum_preserved(Kind::cflmc, true, true, 400);
    return "utmc " + a + "; cflmc " + b;
  });
  criterion(4, "translated solutions never cost more", check_translation_dominance);
  criterion(5, "normalization conserves shipped and received totals",
            check_normalization_conserves);
  criterion(6, "every feasible objective stays below the instance bound",
            check_upper_bound_strict);
  criterion(7, "transport solver matches full enumeration", check_transport_exact);
  criterion(8, "metric outputs stay metric, general outputs keep the cost cap",
            check_cost_shape_preserved);
  criterion(9, "approximation pipeline is sound end to end", check_pipeline_sound);
  criterion(10, "command line runs are byte-for-byte reproducible",
            [&cli] { return check_cli_deterministic(cli); });

  return g_failures == 0 ? 0 : 1;
}
