#include "flmc/harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "flmc/io.hpp"
#include "flmc/solvers.hpp"
#include "flmc/transport.hpp"

namespace flmc {

namespace {

void check_params(const GenParams& p) {
  if (p.num_facilities < 0 || p.num_clients < 0) {
    throw std::invalid_argument("generator: negative dimensions");
  }
  if (p.grid < 0 || p.caps.max_capacity < 0 || p.caps.max_demand < 0 ||
      p.caps.max_penalty < 0 || p.caps.max_opening_cost < 0) {
    throw std::invalid_argument("generator: negative value bounds");
  }
}

Units draw(SplitMix64& rng, Units bound) {
  return static_cast<Units>(rng.below(static_cast<std::uint64_t>(bound) + 1));
}

// The blocks shared by both generators once the cost matrix exists: demands,
// then capacities, then opening costs, then penalties.  Kinds that must
// serve every client get their last capacity lifted to cover any deficit, so
// the output is always feasible.
void fill_values(Instance& inst, const GenParams& p, SplitMix64& rng) {
  const Index m = p.num_facilities;
  const Index n = p.num_clients;
  inst.kind = p.kind;
  inst.demands.resize(n);
  for (Index j = 0; j < n; ++j) inst.demands(j) = draw(rng, p.caps.max_demand);
  const Units total = inst.total_demand();

  inst.capacities.resize(m);
  if (kind_is_uncapacitated(p.kind)) {
    inst.capacities.setConstant(total);
  } else {
    for (Index i = 0; i < m; ++i) inst.capacities(i) = draw(rng, p.caps.max_capacity);
    if (kind_has_opening_costs(p.kind)) {
      const Units supply = inst.total_supply();
      if (supply < total) {
        if (m == 0) {
          throw std::invalid_argument("generator: positive demand but no facilities");
        }
        inst.capacities(m - 1) = checked_add(inst.capacities(m - 1), total - supply);
      }
    }
  }

  if (kind_has_opening_costs(p.kind)) {
    inst.opening_costs.resize(m);
    for (Index i = 0; i < m; ++i) inst.opening_costs(i) = draw(rng, p.caps.max_opening_cost);
  } else {
    inst.opening_costs.resize(0);
  }
  if (kind_has_penalties(p.kind)) {
    inst.penalties.resize(n);
    for (Index j = 0; j < n; ++j) inst.penalties(j) = draw(rng, p.caps.max_penalty);
  } else {
    inst.penalties.resize(0);
  }
}

void check_output(const Instance& inst, const char* who) {
  const ValidationReport report = validate_instance(inst);
  if (!report.ok()) {
    throw std::logic_error(std::string(who) + " produced an invalid instance: " +
                           report.to_string());
  }
}

}  // namespace

Instance generate_metric_instance(const GenParams& p) {
  check_params(p);
  SplitMix64 rng(p.seed);
  const Index m = p.num_facilities;
  const Index n = p.num_clients;

  // L1 distances between lattice points satisfy the four-point inequality,
  // so the metric claim holds by construction.
  std::vector<std::pair<Units, Units>> facility_at(static_cast<size_t>(m));
  std::vector<std::pair<Units, Units>> client_at(static_cast<size_t>(n));
  for (auto& pt : facility_at) pt = {draw(rng, p.grid), draw(rng, p.grid)};
  for (auto& pt : client_at) pt = {draw(rng, p.grid), draw(rng, p.grid)};

  Instance inst;
  inst.costs.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      const auto& [fx, fy] = facility_at[static_cast<size_t>(i)];
      const auto& [cx, cy] = client_at[static_cast<size_t>(j)];
      inst.costs(i, j) = std::abs(fx - cx) + std::abs(fy - cy);
    }
  }
  fill_values(inst, p, rng);
  inst.metric_claim = true;
  check_output(inst, "generate_metric_instance");
  return inst;
}

Instance generate_general_instance(const GenParams& p) {
  check_params(p);
  SplitMix64 rng(p.seed);
  const Index m = p.num_facilities;
  const Index n = p.num_clients;

  Instance inst;
  inst.costs.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) inst.costs(i, j) = draw(rng, p.grid);
  }
  fill_values(inst, p, rng);
  inst.metric_claim = false;
  check_output(inst, "generate_general_instance");
  return inst;
}

Solution random_feasible_solution(const Instance& inst, SplitMix64& rng) {
  {
    const ValidationReport report = validate_instance(inst);
    if (!report.ok()) {
      throw std::invalid_argument("random_feasible_solution: invalid instance: " +
                                  report.to_string());
    }
  }
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();
  const bool openings = kind_has_opening_costs(inst.kind);

  // Reject a third of the rejectable clients, then more if capacity demands
  // it; open two thirds of the facilities, then more until capacity
  // suffices.
  std::vector<char> unserved(static_cast<size_t>(n), 0);
  if (kind_has_penalties(inst.kind)) {
    for (Index j = 0; j < n; ++j) {
      if (inst.demands(j) > 0 && rng.below(3) == 0) unserved[static_cast<size_t>(j)] = 1;
    }
  }
  auto served_total = [&]() {
    Units total = 0;
    for (Index j = 0; j < n; ++j) {
      if (!unserved[static_cast<size_t>(j)]) total = checked_add(total, inst.demands(j));
    }
    return total;
  };

  std::vector<char> open(static_cast<size_t>(m), 1);
  if (openings) {
    for (Index i = 0; i < m; ++i) open[static_cast<size_t>(i)] = rng.below(3) > 0;
  }
  auto open_capacity = [&]() {
    Units total = 0;
    for (Index i = 0; i < m; ++i) {
      if (open[static_cast<size_t>(i)]) total = checked_add(total, inst.capacities(i));
    }
    return total;
  };
  if (openings) {
    for (Index i = 0; i < m && open_capacity() < served_total(); ++i) {
      open[static_cast<size_t>(i)] = 1;
    }
  }
  if (kind_has_penalties(inst.kind)) {
    for (Index j = 0; j < n && open_capacity() < served_total(); ++j) {
      if (inst.demands(j) > 0) unserved[static_cast<size_t>(j)] = 1;
    }
  }
  if (open_capacity() < served_total()) {
    throw std::invalid_argument("random_feasible_solution: instance cannot serve its demand");
  }

  FlowMatrix x = FlowMatrix::Zero(m, n);
  UnitsVector left = inst.capacities;
  for (Index i = 0; i < m; ++i) {
    if (!open[static_cast<size_t>(i)]) left(i) = 0;
  }
  for (Index j = 0; j < n; ++j) {
    if (unserved[static_cast<size_t>(j)]) continue;
    Units need = inst.demands(j);
    while (need > 0) {
      std::vector<Index> candidates;
      for (Index i = 0; i < m; ++i) {
        if (left(i) > 0) candidates.push_back(i);
      }
      const Index pick = candidates[static_cast<size_t>(
          rng.below(static_cast<std::uint64_t>(candidates.size())))];
      const Units amount =
          1 + static_cast<Units>(rng.below(static_cast<std::uint64_t>(std::min(left(pick), need))));
      x(pick, j) += amount;
      left(pick) -= amount;
      need -= amount;
    }
  }

  Solution sol;
  sol.flows = matrix_to_flows(x);
  for (Index j = 0; j < n; ++j) {
    if (unserved[static_cast<size_t>(j)]) sol.unserved.push_back(j);
  }
  if (openings) {
    for (Index i = 0; i < m; ++i) {
      if (open[static_cast<size_t>(i)]) sol.open.push_back(i);
    }
  }
  const EvalResult res = evaluate(inst, sol);
  if (!res.ok()) {
    throw std::logic_error("random_feasible_solution built an infeasible solution: " +
                           res.report.to_string());
  }
  sol.objective = res.value;
  return sol;
}

std::optional<double> BenchReport::max_ratio() const {
  std::optional<double> best;
  for (const BenchRow& row : rows) {
    if (row.ratio && (!best || *row.ratio > *best)) best = *row.ratio;
  }
  return best;
}

std::optional<double> BenchReport::mean_ratio() const {
  double total = 0;
  int counted = 0;
  for (const BenchRow& row : rows) {
    if (row.ratio) {
      total += *row.ratio;
      ++counted;
    }
  }
  if (counted == 0) return std::nullopt;
  return total / counted;
}

BenchReport bench_run(const BenchConfig& config) {
  BenchReport report;
  for (const BenchSuite& suite : config.suites) {
    if (suite.kind != Kind::tmc && suite.kind != Kind::utmc) {
      throw std::invalid_argument("bench suites take tmc or utmc instances");
    }
    for (int k = 0; k < suite.count; ++k) {
      GenParams p = suite.base;
      p.kind = suite.kind;
      p.seed = suite.base.seed + static_cast<std::uint64_t>(k);
      const Instance inst = suite.mode == CostMode::metric ? generate_metric_instance(p)
                                                           : generate_general_instance(p);
      BenchRow row;
      row.suite = suite.name;
      row.seed = p.seed;
      row.num_facilities = inst.num_facilities();
      row.num_clients = inst.num_clients();

      const auto started = std::chrono::steady_clock::now();
      try {
        Reduction red;
        Solution heuristic;
        if (suite.kind == Kind::utmc && suite.mode == CostMode::metric) {
          red = utmc_to_ufl(inst);
          heuristic = greedy_ufl(red.instance);
        } else {
          red = tmc_to_cfl(inst, suite.mode);
          heuristic = local_search_cfl(red.instance, suite.params);
        }
        const Solution translated =
            translate_cfl_solution_to_tmc(red.certificate, red.instance, heuristic);
        row.heuristic = heuristic.objective;
        row.translated = translated.objective;
        row.ok = verify_solution(inst, translated).ok() &&
                 translated.objective <= heuristic.objective;
        if (inst.num_clients() <= suite.oracle_limit) {
          const Solution opt = exact_tmc(inst);
          row.oracle = opt.objective;
          if (translated.objective < opt.objective) row.ok = false;
          if (opt.objective > 0) {
            row.ratio = static_cast<double>(translated.objective) /
                        static_cast<double>(opt.objective);
          } else if (translated.objective == 0) {
            row.ratio = 1.0;
          }
        }
      } catch (const std::exception&) {
        row.ok = false;
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              started)
                        .count();
      if (!row.ok) {
        ++report.failures;
        if (!report.failing_instance_json) {
          report.failing_instance_json = instance_to_json(inst);
        }
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::string bench_table(const BenchReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "suite" << std::right << std::setw(12) << "seed"
      << std::setw(5) << "m" << std::setw(5) << "n" << std::setw(10) << "reduced"
      << std::setw(12) << "translated" << std::setw(10) << "oracle" << std::setw(8) << "ratio"
      << std::setw(6) << "ok" << "\n";
  for (const BenchRow& row : report.rows) {
    out << std::left << std::setw(16) << row.suite << std::right << std::setw(12) << row.seed
        << std::setw(5) << row.num_facilities << std::setw(5) << row.num_clients
        << std::setw(10) << row.heuristic << std::setw(12) << row.translated;
    if (row.oracle) {
      out << std::setw(10) << *row.oracle;
    } else {
      out << std::setw(10) << "-";
    }
    if (row.ratio) {
      out << std::setw(8) << std::fixed << std::setprecision(3) << *row.ratio
          << std::defaultfloat;
    } else {
      out << std::setw(8) << "-";
    }
    out << std::setw(6) << (row.ok ? "yes" : "NO") << "\n";
  }
  out << report.rows.size() << " runs, " << report.failures << " failures";
  if (const auto r = report.max_ratio()) {
    out << ", worst ratio " << std::fixed << std::setprecision(3) << *r << std::defaultfloat;
  }
  out << "\n";
  return out.str();
}

std::string bench_jsonl(const BenchReport& report) {
  std::ostringstream out;
  for (const BenchRow& row : report.rows) {
    nlohmann::json j;
    j["suite"] = row.suite;
    j["seed"] = row.seed;
    j["facilities"] = row.num_facilities;
    j["clients"] = row.num_clients;
    j["reduced_objective"] = row.heuristic;
    j["translated_objective"] = row.translated;
    j["oracle"] = row.oracle ? nlohmann::json(*row.oracle) : nlohmann::json(nullptr);
    j["ratio"] = row.ratio ? nlohmann::json(*row.ratio) : nlohmann::json(nullptr);
    j["ok"] = row.ok;
    out << j.dump() << "\n";
  }
  nlohmann::json tail;
  tail["runs"] = report.rows.size();
  tail["failures"] = report.failures;
  tail["max_ratio"] = report.max_ratio() ? nlohmann::json(*report.max_ratio())
                                         : nlohmann::json(nullptr);
  tail["mean_ratio"] = report.mean_ratio() ? nlohmann::json(*report.mean_ratio())
                                           : nlohmann::json(nullptr);
  out << tail.dump() << "\n";
  return out.str();
}

}  // namespace flmc
