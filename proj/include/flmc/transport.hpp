#pragma once

#include "flmc/model.hpp"
#include "flmc/types.hpp"

namespace flmc {

struct TransportResult {
  bool feasible = false;
  FlowMatrix flows;  // facilities x clients; all zero when infeasible
  Money total_cost = 0;
};

// Exact minimum-cost transportation: route every unit of demand through the
// given supplies at minimum total cost.  Infeasible (total demand exceeding
// total supply) is reported, not thrown.  Deterministic: equal-cost optima
// are broken lexicographically, so the same input always yields the same
// flow matrix.  Throws std::invalid_argument on dimension mismatches or
// negative entries and std::overflow_error if the total cost leaves int64.
TransportResult min_cost_transport(const UnitsVector& supplies,
                                   const UnitsVector& demands,
                                   const CostMatrix& costs);

// Maximum-value counterpart, obtained by complementing the costs against
// their maximum entry.  Used for worst-case bounds, so only the value is
// returned.  Throws std::invalid_argument when demand exceeds supply.
Money max_value_transport(const UnitsVector& supplies,
                          const UnitsVector& demands,
                          const CostMatrix& costs);

// Optimal completion of a partially fixed solution: facilities keep only
// their unused capacity (closed facilities contribute nothing for kinds with
// opening costs), clients keep only their unmet demand, and clients flagged
// unserved ask for nothing.  Throws std::invalid_argument if the fixed part
// already violates a bound.
TransportResult residual_transport(const Instance& inst, const Solution& fixed);

}  // namespace flmc
