#include "flmc/model.hpp"

#include <algorithm>
#include <sstream>

#include "flmc/transport.hpp"

namespace flmc {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::tmc: return "tmc";
    case Kind::cfl: return "cfl";
    case Kind::ufl: return "ufl";
    case Kind::utmc: return "utmc";
    case Kind::cflmc: return "cflmc";
  }
  throw std::logic_error("unreachable kind");
}

Kind kind_from_name(const std::string& name) {
  if (name == "tmc") return Kind::tmc;
  if (name == "cfl") return Kind::cfl;
  if (name == "ufl") return Kind::ufl;
  if (name == "utmc") return Kind::utmc;
  if (name == "cflmc") return Kind::cflmc;
  throw std::invalid_argument("unknown problem kind: " + name);
}

bool kind_has_opening_costs(Kind k) {
  return k == Kind::cfl || k == Kind::ufl || k == Kind::cflmc;
}

bool kind_has_penalties(Kind k) {
  return k == Kind::tmc || k == Kind::utmc || k == Kind::cflmc;
}

bool kind_is_uncapacitated(Kind k) { return k == Kind::ufl || k == Kind::utmc; }

void ValidationReport::add(std::string code, std::string detail) {
  violations.push_back({std::move(code), std::move(detail)});
}

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (const auto& v : violations) {
    out << v.code << ": " << v.detail << "\n";
  }
  return out.str();
}

bool check_metric(const CostMatrix& costs) {
  const Index m = costs.rows();
  const Index n = costs.cols();
  // Sums of three entries can top int64 only for adversarial inputs, but the
  // check must still answer honestly, so compare in 128 bits.
  using Wide = __int128;
  for (Index i0 = 0; i0 < m; ++i0) {
    for (Index i1 = 0; i1 < m; ++i1) {
      for (Index j0 = 0; j0 < n; ++j0) {
        for (Index j1 = 0; j1 < n; ++j1) {
          const Wide lhs = costs(i0, j0);
          const Wide rhs = Wide(costs(i0, j1)) + Wide(costs(i1, j1)) + Wide(costs(i1, j0));
          if (lhs > rhs) return false;
        }
      }
    }
  }
  return true;
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();

  if (inst.costs.rows() != m || inst.costs.cols() != n) {
    report.add("shape", "cost matrix is " + std::to_string(inst.costs.rows()) + "x" +
                            std::to_string(inst.costs.cols()) + ", expected " +
                            std::to_string(m) + "x" + std::to_string(n));
    return report;  // nothing below is meaningful with the wrong shape
  }

  const Index expected_f = kind_has_opening_costs(inst.kind) ? m : 0;
  if (inst.opening_costs.size() != expected_f) {
    report.add("opening_costs", "expected " + std::to_string(expected_f) + " entries, got " +
                                    std::to_string(inst.opening_costs.size()));
  }
  const Index expected_r = kind_has_penalties(inst.kind) ? n : 0;
  if (inst.penalties.size() != expected_r) {
    report.add("penalties", "expected " + std::to_string(expected_r) + " entries, got " +
                                std::to_string(inst.penalties.size()));
  }

  auto require_nonnegative = [&report](const char* what, auto&& vec) {
    for (Index i = 0; i < vec.size(); ++i) {
      if (vec(i) < 0) {
        report.add("negative", std::string(what) + "[" + std::to_string(i) + "] = " +
                                   std::to_string(vec(i)));
      }
    }
  };
  require_nonnegative("capacity", inst.capacities);
  require_nonnegative("demand", inst.demands);
  require_nonnegative("opening_cost", inst.opening_costs);
  require_nonnegative("penalty", inst.penalties);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (inst.costs(i, j) < 0) {
        report.add("negative", "cost[" + std::to_string(i) + "][" + std::to_string(j) +
                                   "] = " + std::to_string(inst.costs(i, j)));
      }
    }
  }
  if (!report.ok()) return report;

  if (inst.metric_claim && !check_metric(inst.costs)) {
    report.add("metric_claim", "costs violate the four-point inequality");
  }
  if (kind_is_uncapacitated(inst.kind)) {
    const Units total = inst.total_demand();
    for (Index i = 0; i < m; ++i) {
      if (inst.capacities(i) < total) {
        report.add("capacity_binds", "capacity[" + std::to_string(i) + "] = " +
                                         std::to_string(inst.capacities(i)) +
                                         " is below the total demand " + std::to_string(total));
      }
    }
  }
  return report;
}

bool feasible_cfl(const Instance& inst) {
  if (!kind_has_opening_costs(inst.kind)) {
    throw std::invalid_argument(std::string("feasible_cfl expects a kind with opening costs, got ") +
                                kind_name(inst.kind));
  }
  return inst.total_supply() >= inst.total_demand();
}

FlowMatrix flows_to_matrix(Index num_facilities, Index num_clients,
                           const std::vector<FlowEntry>& flows) {
  FlowMatrix x = FlowMatrix::Zero(num_facilities, num_clients);
  for (const auto& e : flows) {
    if (e.facility < 0 || e.facility >= num_facilities || e.client < 0 || e.client >= num_clients) {
      throw std::invalid_argument("flow entry out of range");
    }
    if (e.amount <= 0) throw std::invalid_argument("flow amount must be positive");
    if (x(e.facility, e.client) != 0) throw std::invalid_argument("duplicate flow entry");
    x(e.facility, e.client) = e.amount;
  }
  return x;
}

std::vector<FlowEntry> matrix_to_flows(const FlowMatrix& x) {
  std::vector<FlowEntry> flows;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (x(i, j) != 0) flows.push_back({i, j, x(i, j)});
    }
  }
  return flows;
}

namespace {

// Sorted, de-duplicated, in-range index list -> mask.  Any defect lands in
// the report under the given label.
std::vector<char> index_mask(const std::vector<Index>& indices, Index size,
                             const char* label, ValidationReport& report) {
  std::vector<char> mask(static_cast<size_t>(size), 0);
  Index prev = -1;
  for (Index idx : indices) {
    if (idx < 0 || idx >= size) {
      report.add("index_range", std::string(label) + " index " + std::to_string(idx) +
                                    " out of range");
      continue;
    }
    if (idx <= prev) {
      report.add("index_order", std::string(label) + " indices must be strictly ascending");
    }
    prev = idx;
    mask[static_cast<size_t>(idx)] = 1;
  }
  return mask;
}

}  // namespace

EvalResult evaluate(const Instance& inst, const Solution& sol) {
  EvalResult result;
  ValidationReport& report = result.report;
  {
    ValidationReport inst_report = validate_instance(inst);
    if (!inst_report.ok()) {
      report.add("instance", inst_report.to_string());
      return result;
    }
  }
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();

  if (!kind_has_penalties(inst.kind) && !sol.unserved.empty()) {
    report.add("unserved_not_allowed", "this kind serves every client");
  }
  if (!kind_has_opening_costs(inst.kind) && !sol.open.empty()) {
    report.add("open_not_allowed", "this kind has no opening decisions");
  }
  const std::vector<char> unserved = index_mask(sol.unserved, n, "unserved", report);
  const std::vector<char> open = index_mask(sol.open, m, "open", report);

  UnitsVector shipped = UnitsVector::Zero(m);
  UnitsVector received = UnitsVector::Zero(n);
  std::vector<std::vector<char>> seen(static_cast<size_t>(m),
                                      std::vector<char>(static_cast<size_t>(n), 0));
  for (const auto& e : sol.flows) {
    if (e.facility < 0 || e.facility >= m || e.client < 0 || e.client >= n) {
      report.add("flow_range", "flow (" + std::to_string(e.facility) + ", " +
                                   std::to_string(e.client) + ") out of range");
      continue;
    }
    if (e.amount <= 0) {
      report.add("flow_amount", "flow (" + std::to_string(e.facility) + ", " +
                                    std::to_string(e.client) + ") has non-positive amount " +
                                    std::to_string(e.amount));
      continue;
    }
    if (seen[static_cast<size_t>(e.facility)][static_cast<size_t>(e.client)]) {
      report.add("flow_duplicate", "flow (" + std::to_string(e.facility) + ", " +
                                       std::to_string(e.client) + ") listed twice");
      continue;
    }
    seen[static_cast<size_t>(e.facility)][static_cast<size_t>(e.client)] = 1;
    shipped(e.facility) = checked_add(shipped(e.facility), e.amount);
    received(e.client) = checked_add(received(e.client), e.amount);
    if (kind_has_opening_costs(inst.kind) && !open[static_cast<size_t>(e.facility)]) {
      report.add("closed_facility", "flow from closed facility " + std::to_string(e.facility));
    }
  }

  for (Index i = 0; i < m; ++i) {
    if (shipped(i) > inst.capacities(i)) {
      report.add("capacity", "facility " + std::to_string(i) + " ships " +
                                 std::to_string(shipped(i)) + " of capacity " +
                                 std::to_string(inst.capacities(i)));
    }
  }
  for (Index j = 0; j < n; ++j) {
    if (unserved[static_cast<size_t>(j)]) {
      if (inst.demands(j) == 0) {
        report.add("unserved_zero_demand",
                   "client " + std::to_string(j) + " has no demand to reject");
      }
      if (received(j) != 0) {
        report.add("unserved_receives", "unserved client " + std::to_string(j) + " receives " +
                                            std::to_string(received(j)));
      }
    } else if (received(j) != inst.demands(j)) {
      report.add("partial_service", "client " + std::to_string(j) + " receives " +
                                        std::to_string(received(j)) + " of demand " +
                                        std::to_string(inst.demands(j)));
    }
  }
  if (!report.ok()) return result;

  Money value = 0;
  for (const auto& e : sol.flows) {
    value = checked_add(value, checked_mul(inst.costs(e.facility, e.client), e.amount));
  }
  for (Index j : sol.unserved) value = checked_add(value, inst.penalties(j));
  for (Index i : sol.open) value = checked_add(value, inst.opening_costs(i));
  result.value = value;
  return result;
}

ValidationReport verify_solution(const Instance& inst, const Solution& sol) {
  EvalResult eval = evaluate(inst, sol);
  if (eval.ok() && eval.value != sol.objective) {
    eval.report.add("objective_mismatch", "stored " + std::to_string(sol.objective) +
                                              ", recomputed " + std::to_string(eval.value));
  }
  return eval.report;
}

Money instance_upper_bound(const Instance& inst) {
  if (inst.kind != Kind::cfl && inst.kind != Kind::cflmc) {
    throw std::invalid_argument(std::string("instance_upper_bound expects cfl or cflmc, got ") +
                                kind_name(inst.kind));
  }
  if (!feasible_cfl(inst)) {
    throw std::invalid_argument("total capacity does not cover total demand");
  }
  const Money openings = checked_sum(inst.opening_costs);
  const Money dearest = max_value_transport(inst.capacities, inst.demands, inst.costs);
  return checked_add(checked_add(openings, dearest), 1);
}

}  // namespace flmc
