#pragma once

#include <string>
#include <vector>

#include "flmc/types.hpp"

namespace flmc {

// The five problem kinds handled by this library.
//
//   tmc    transportation with market choice: capacitated facilities, each
//          client is either fully served or pays its penalty
//   cfl    capacitated facility location: opening costs, everyone served
//   ufl    uncapacitated facility location: every capacity covers the whole
//          demand, so capacities never bind
//   utmc   uncapacitated market choice (tmc with non-binding capacities)
//   cflmc  facility location with market choice: opening costs and penalties
enum class Kind { tmc, cfl, ufl, utmc, cflmc };

const char* kind_name(Kind k);
Kind kind_from_name(const std::string& name);

// Facilities carry opening costs for these kinds.
bool kind_has_opening_costs(Kind k);
// Clients carry rejection penalties for these kinds.
bool kind_has_penalties(Kind k);
// Each individual capacity must cover the total demand for these kinds.
bool kind_is_uncapacitated(Kind k);

struct Instance {
  Kind kind = Kind::tmc;
  UnitsVector capacities;     // per facility
  MoneyVector opening_costs;  // per facility, empty unless the kind has them
  UnitsVector demands;        // per client
  MoneyVector penalties;      // per client, empty unless the kind has them
  CostMatrix costs;           // unit transport cost, facility row x client col
  bool metric_claim = false;  // whether costs are claimed to satisfy the
                              // four-point inequality (see check_metric)

  Index num_facilities() const { return capacities.size(); }
  Index num_clients() const { return demands.size(); }
  Units total_demand() const { return checked_sum(demands); }
  Units total_supply() const { return checked_sum(capacities); }
};

struct FlowEntry {
  Index facility = 0;
  Index client = 0;
  Units amount = 0;  // strictly positive in any stored solution

  friend bool operator==(const FlowEntry&, const FlowEntry&) = default;
};

struct Solution {
  std::vector<FlowEntry> flows;  // ascending (facility, client)
  std::vector<Index> unserved;   // clients paying their penalty, ascending
  std::vector<Index> open;       // open facilities, ascending
  Money objective = 0;
};

struct Violation {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string code, std::string detail);
  std::string to_string() const;
};

// Result of evaluating a solution: when the report is clean, value holds the
// objective recomputed from scratch (transport plus penalties plus opening
// costs).  When it is not, value is meaningless and left at zero.
struct EvalResult {
  Money value = 0;
  ValidationReport report;

  bool ok() const { return report.ok(); }
};

// True iff the matrix satisfies the four-point inequality
//   c(i0,j0) <= c(i0,j1) + c(i1,j1) + c(i1,j0)  for all i0,i1,j0,j1,
// the bipartite analogue of the triangle inequality.  Matrices with a
// negative entry always fail (take i0 == i1, j0 == j1).
bool check_metric(const CostMatrix& costs);

// Structural sanity of an instance: vector lengths agree with the kind,
// nothing is negative, the metric claim holds when made, and uncapacitated
// kinds really have non-binding capacities.
ValidationReport validate_instance(const Instance& inst);

// Whether total capacity covers total demand.  Only meaningful for kinds
// that must serve everyone; throws std::invalid_argument for tmc and utmc.
bool feasible_cfl(const Instance& inst);

// Recomputes the objective of sol against inst, checking every feasibility
// invariant on the way (flow bounds, capacities, exact service, open flags,
// unserved flags).  The stored objective is deliberately ignored here; see
// verify_solution for the strict variant.
EvalResult evaluate(const Instance& inst, const Solution& sol);

// evaluate plus the requirement that the stored objective matches the
// recomputed value.
ValidationReport verify_solution(const Instance& inst, const Solution& sol);

// Strict upper bound on the objective of any feasible solution that serves
// every client: all opening costs, plus the dearest possible routing of all
// demand with every facility available, plus one.  Requires kind cfl or
// cflmc and total capacity covering total demand.
Money instance_upper_bound(const Instance& inst);

// Dense view of a flow list.  Rejects out-of-range indices, non-positive
// amounts and duplicate (facility, client) pairs.
FlowMatrix flows_to_matrix(Index num_facilities, Index num_clients,
                           const std::vector<FlowEntry>& flows);

// Sparse view of a flow matrix, ascending (facility, client), zeros skipped.
std::vector<FlowEntry> matrix_to_flows(const FlowMatrix& x);

}  // namespace flmc
