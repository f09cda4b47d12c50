#pragma once

#include <optional>
#include <vector>

#include "flmc/model.hpp"

// Helpers shared by the unit and acceptance binaries: compact instance
// construction and brute-force oracles that enumerate flow matrices
// directly, sharing no code with the library's solvers.
namespace testsupport {

using flmc::CostMatrix;
using flmc::Index;
using flmc::Instance;
using flmc::Kind;
using flmc::Money;
using flmc::MoneyVector;
using flmc::Units;
using flmc::UnitsVector;

inline UnitsVector uvec(const std::vector<Units>& xs) {
  UnitsVector v(static_cast<Index>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) v(static_cast<Index>(i)) = xs[i];
  return v;
}

inline MoneyVector mvec(const std::vector<Money>& xs) {
  MoneyVector v(static_cast<Index>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) v(static_cast<Index>(i)) = xs[i];
  return v;
}

inline CostMatrix cmat(Index rows, Index cols, const std::vector<std::vector<Money>>& entries) {
  CostMatrix c(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) c(i, j) = entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
  }
  return c;
}

inline Instance make_instance(Kind kind, const std::vector<Units>& capacities,
                              const std::vector<Money>& opening_costs,
                              const std::vector<Units>& demands,
                              const std::vector<Money>& penalties,
                              const std::vector<std::vector<Money>>& costs,
                              bool metric_claim = false) {
  Instance inst;
  inst.kind = kind;
  inst.capacities = uvec(capacities);
  inst.opening_costs = mvec(opening_costs);
  inst.demands = uvec(demands);
  inst.penalties = mvec(penalties);
  inst.costs = cmat(static_cast<Index>(capacities.size()), static_cast<Index>(demands.size()), costs);
  inst.metric_claim = metric_claim;
  return inst;
}

namespace detail {

// Walks every complete flow matrix: client by client, facility by facility,
// trying every split of the client's demand that the remaining supplies
// allow.  `minimize` prunes on the incumbent; maximization cannot.
inline void every_flow(const CostMatrix& costs, const UnitsVector& demands, UnitsVector& left,
                       Index j, Index i, Units need, Money acc, bool minimize,
                       std::optional<Money>& best) {
  const Index m = costs.rows();
  const Index n = costs.cols();
  if (minimize && best && acc >= *best) return;
  if (j == n) {
    if (!best || (minimize ? acc < *best : acc > *best)) best = acc;
    return;
  }
  if (i == m) {
    if (need > 0) return;  // this split cannot finish the client
    const Index next = j + 1;
    every_flow(costs, demands, left, next, 0, next < n ? demands(next) : 0, acc, minimize, best);
    return;
  }
  const Units top = std::min(left(i), need);
  for (Units a = 0; a <= top; ++a) {
    left(i) -= a;
    every_flow(costs, demands, left, j, i + 1, need - a, acc + costs(i, j) * a, minimize, best);
    left(i) += a;
  }
}

inline std::optional<Money> extreme_transport(const UnitsVector& supplies,
                                              const UnitsVector& demands,
                                              const CostMatrix& costs, bool minimize) {
  UnitsVector left = supplies;
  std::optional<Money> best;
  const Index n = demands.size();
  detail::every_flow(costs, demands, left, 0, 0, n > 0 ? demands(0) : 0, 0, minimize, best);
  return best;  // disengaged iff no complete routing exists
}

}  // namespace detail

inline std::optional<Money> oracle_min_transport(const UnitsVector& supplies,
                                                 const UnitsVector& demands,
                                                 const CostMatrix& costs) {
  return detail::extreme_transport(supplies, demands, costs, true);
}

inline std::optional<Money> oracle_max_transport(const UnitsVector& supplies,
                                                 const UnitsVector& demands,
                                                 const CostMatrix& costs) {
  return detail::extreme_transport(supplies, demands, costs, false);
}

// Optimal market-choice value by enumerating rejected subsets over the
// brute-force router above.
inline Money oracle_tmc_value(const Instance& inst) {
  const Index n = inst.num_clients();
  std::optional<Money> best;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    Money penalty = 0;
    UnitsVector served = inst.demands;
    bool skip = false;
    for (Index j = 0; j < n; ++j) {
      if (mask >> j & 1u) {
        if (inst.demands(j) == 0) {
          skip = true;
          break;
        }
        served(j) = 0;
        penalty += inst.penalties(j);
      }
    }
    if (skip) continue;
    const std::optional<Money> t = oracle_min_transport(inst.capacities, served, inst.costs);
    if (!t) continue;
    const Money value = penalty + *t;
    if (!best || value < *best) best = value;
  }
  return *best;
}

// Optimal full-service facility-location value by enumerating open subsets.
inline std::optional<Money> oracle_cfl_value(const Instance& inst) {
  const Index m = inst.num_facilities();
  std::optional<Money> best;
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    Money opening = 0;
    UnitsVector supplies = UnitsVector::Zero(m);
    for (Index i = 0; i < m; ++i) {
      if (mask >> i & 1u) {
        supplies(i) = inst.capacities(i);
        opening += inst.opening_costs(i);
      }
    }
    const std::optional<Money> t = oracle_min_transport(supplies, inst.demands, inst.costs);
    if (!t) continue;
    const Money value = opening + *t;
    if (!best || value < *best) best = value;
  }
  return best;
}

}  // namespace testsupport
