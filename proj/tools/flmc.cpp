// Command-line front end: generate instances, reduce them, solve, translate
// solutions back across a reduction, verify, and benchmark.  Every file it
// reads or writes is the canonical JSON handled by the io module; "-" as an
// output path means stdout.
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flmc/harness.hpp"
#include "flmc/io.hpp"
#include "flmc/model.hpp"
#include "flmc/reductions.hpp"
#include "flmc/solvers.hpp"
#include "flmc/transport.hpp"

namespace {

using namespace flmc;

void emit(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

int run_generate(const std::string& kind_name_arg, const std::string& mode_name,
                 const GenParams& params, const std::string& out) {
  GenParams p = params;
  p.kind = kind_from_name(kind_name_arg);
  const CostMode mode = cost_mode_from_name(mode_name);
  const Instance inst =
      mode == CostMode::metric ? generate_metric_instance(p) : generate_general_instance(p);
  emit(out, instance_to_json(inst));
  return 0;
}

ReductionDirection default_direction(Kind kind, CostMode mode) {
  switch (kind) {
    case Kind::tmc: return ReductionDirection::tmc_to_cfl;
    case Kind::utmc:
      return mode == CostMode::metric ? ReductionDirection::utmc_to_ufl
                                      : ReductionDirection::tmc_to_cfl;
    case Kind::cfl: return ReductionDirection::cfl_to_tmc;
    case Kind::cflmc: return ReductionDirection::cflmc_to_cfl;
    case Kind::ufl: break;
  }
  throw std::invalid_argument("no reduction starts from a ufl instance");
}

int run_reduce(const std::string& in, const std::string& mode_name,
               const std::string& direction_arg, const std::string& out_instance,
               const std::string& out_cert) {
  const Instance inst = load_instance(in);
  const CostMode mode = cost_mode_from_name(mode_name);
  const ReductionDirection direction = direction_arg.empty()
                                           ? default_direction(inst.kind, mode)
                                           : direction_from_name(direction_arg);
  Reduction red;
  switch (direction) {
    case ReductionDirection::tmc_to_cfl: red = tmc_to_cfl(inst, mode); break;
    case ReductionDirection::cfl_to_tmc: red = cfl_to_tmc(inst, mode); break;
    case ReductionDirection::utmc_to_ufl: red = utmc_to_ufl(inst); break;
    case ReductionDirection::cflmc_to_cfl: red = cflmc_to_cfl(inst, mode); break;
  }
  emit(out_instance, instance_to_json(red.instance));
  emit(out_cert, certificate_to_json(red.certificate));
  return 0;
}

int run_solve(const std::string& in, const std::string& solver, Index limit,
              int max_iterations, const std::string& out) {
  const Instance inst = load_instance(in);
  Solution sol;
  if (solver == "exact") {
    switch (inst.kind) {
      case Kind::tmc:
      case Kind::utmc: sol = exact_tmc(inst, limit); break;
      case Kind::cfl:
      case Kind::ufl: sol = exact_cfl(inst, limit); break;
      case Kind::cflmc: sol = exact_cflmc(inst, std::min(limit, kDefaultExactCflmcLimit)); break;
    }
  } else if (solver == "local-search") {
    SolverParams params;
    params.max_iterations = max_iterations;
    sol = local_search_cfl(inst, params);
  } else if (solver == "greedy") {
    sol = greedy_ufl(inst);
  } else {
    throw std::invalid_argument("unknown solver: " + solver +
                                " (expected exact, local-search or greedy)");
  }
  emit(out, solution_to_json(sol));
  return 0;
}

int run_translate(const std::string& cert_path, const std::string& reduced_path,
                  const std::string& solution_path, const std::string& out) {
  const ReductionCertificate cert = load_certificate(cert_path);
  const Instance reduced = load_instance(reduced_path);
  const Solution sol = load_solution(solution_path);
  const Solution translated = translate_solution(cert, reduced, sol);
  emit(out, solution_to_json(translated));
  return 0;
}

int run_verify(const std::string& instance_path, const std::string& solution_path,
               const std::string& out) {
  const Instance inst = load_instance(instance_path);
  const Solution sol = load_solution(solution_path);
  const ValidationReport report = verify_solution(inst, sol);
  emit(out, report_to_json(report));
  return report.ok() ? 0 : 1;
}

int run_bench(const std::string& config_path, const std::string& out,
              const std::string& repro_path) {
  const BenchConfig config = bench_config_from_json(read_file(config_path));
  const BenchReport report = bench_run(config);
  emit(out, bench_jsonl(report));
  std::cout << bench_table(report);
  double total_ms = 0;
  for (const BenchRow& row : report.rows) total_ms += row.wall_ms;
  std::cerr << "bench wall time: " << total_ms << " ms over " << report.rows.size()
            << " runs\n";
  if (report.failures > 0) {
    if (report.failing_instance_json) {
      write_file(repro_path, *report.failing_instance_json);
      std::cerr << "first failing instance written to " << repro_path << "\n";
    }
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Market-choice and facility-location reductions toolkit"};
  app.require_subcommand(1);

  // generate
  std::string gen_kind = "tmc";
  std::string gen_mode = "metric";
  GenParams gen_params;
  std::string gen_out = "-";
  auto* generate = app.add_subcommand("generate", "Generate a random instance");
  generate->add_option("--kind", gen_kind, "tmc, cfl, ufl, utmc or cflmc");
  generate->add_option("--mode", gen_mode, "metric (lattice distances) or general");
  generate->add_option("--facilities", gen_params.num_facilities, "number of facilities");
  generate->add_option("--clients", gen_params.num_clients, "number of clients");
  generate->add_option("--grid", gen_params.grid, "coordinate bound (metric) or cost cap (general)");
  generate->add_option("--max-capacity", gen_params.caps.max_capacity, "capacity cap");
  generate->add_option("--max-demand", gen_params.caps.max_demand, "demand cap");
  generate->add_option("--max-penalty", gen_params.caps.max_penalty, "penalty cap");
  generate->add_option("--max-opening-cost", gen_params.caps.max_opening_cost,
                       "opening cost cap");
  generate->add_option("--seed", gen_params.seed, "generator seed");
  generate->add_option("--out", gen_out, "output path, - for stdout");

  // reduce
  std::string red_in;
  std::string red_mode = "metric";
  std::string red_direction;
  std::string red_out_instance = "-";
  std::string red_out_cert = "-";
  auto* reduce = app.add_subcommand("reduce", "Reduce an instance across a gadget");
  reduce->add_option("instance", red_in, "instance file")->required();
  reduce->add_option("--mode", red_mode, "metric or general");
  reduce->add_option("--direction", red_direction,
                     "tmc_to_cfl, cfl_to_tmc, utmc_to_ufl or cflmc_to_cfl "
                     "(default: inferred from the kind)");
  reduce->add_option("--out-instance", red_out_instance, "reduced instance path");
  reduce->add_option("--out-cert", red_out_cert, "certificate path");

  // solve
  std::string solve_in;
  std::string solver = "exact";
  Index solve_limit = kDefaultExactLimit;
  int solve_iterations = 1000;
  std::string solve_out = "-";
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", solve_in, "instance file")->required();
  solve->add_option("--solver", solver, "exact, local-search or greedy");
  solve->add_option("--limit", solve_limit, "enumeration limit for the exact solver");
  solve->add_option("--max-iterations", solve_iterations, "local search move budget");
  solve->add_option("--out", solve_out, "output path, - for stdout");

  // translate
  std::string tr_cert, tr_reduced, tr_solution;
  std::string tr_out = "-";
  auto* translate =
      app.add_subcommand("translate", "Map a reduced solution back to the original instance");
  translate->add_option("--cert", tr_cert, "certificate file")->required();
  translate->add_option("--reduced", tr_reduced, "reduced instance file")->required();
  translate->add_option("--solution", tr_solution, "solution of the reduced instance")
      ->required();
  translate->add_option("--out", tr_out, "output path, - for stdout");

  // verify
  std::string ver_instance, ver_solution;
  std::string ver_out = "-";
  auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
  verify->add_option("instance", ver_instance, "instance file")->required();
  verify->add_option("--solution", ver_solution, "solution file")->required();
  verify->add_option("--out", ver_out, "report path, - for stdout");

  // bench
  std::string bench_config, bench_out = "-";
  std::string bench_repro = "bench_failure.json";
  auto* bench = app.add_subcommand("bench", "Run benchmark suites from a config file");
  bench->add_option("--config", bench_config, "suite configuration file")->required();
  bench->add_option("--out", bench_out, "JSONL report path, - for stdout");
  bench->add_option("--repro", bench_repro, "where to drop the first failing instance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) return run_generate(gen_kind, gen_mode, gen_params, gen_out);
    if (reduce->parsed()) {
      return run_reduce(red_in, red_mode, red_direction, red_out_instance, red_out_cert);
    }
    if (solve->parsed()) {
      return run_solve(solve_in, solver, solve_limit, solve_iterations, solve_out);
    }
    if (translate->parsed()) return run_translate(tr_cert, tr_reduced, tr_solution, tr_out);
    if (verify->parsed()) return run_verify(ver_instance, ver_solution, ver_out);
    if (bench->parsed()) return run_bench(bench_config, bench_out, bench_repro);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
