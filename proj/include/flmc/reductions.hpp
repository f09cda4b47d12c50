#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "flmc/model.hpp"
#include "flmc/types.hpp"

namespace flmc {

enum class ReductionDirection { tmc_to_cfl, cfl_to_tmc, utmc_to_ufl, cflmc_to_cfl };
enum class CostMode { metric, general };

const char* direction_name(ReductionDirection d);
ReductionDirection direction_from_name(const std::string& name);
const char* cost_mode_name(CostMode m);
CostMode cost_mode_from_name(const std::string& name);

// Everything needed to map solutions of the reduced instance back to the
// original one, and to rebuild the original instance itself.
struct ReductionCertificate {
  ReductionDirection direction = ReductionDirection::tmc_to_cfl;
  CostMode mode = CostMode::metric;
  // Index of each dummy in the reduced instance, paired with the index it
  // stands for in the original: a dummy facility per client for the
  // market-choice-to-location directions, a dummy client per facility for
  // the reverse one.
  std::vector<std::pair<Index, Index>> dummy_map;
  // The strict upper bound baked into a cfl_to_tmc gadget as the real
  // clients' penalty; absent for the other directions.
  std::optional<Money> iub;
  Index source_num_facilities = 0;
  Index source_num_clients = 0;
};

struct Reduction {
  Instance instance;
  ReductionCertificate certificate;
};

// Market choice to facility location: one dummy facility per client, opening
// cost equal to the client's penalty, capacity equal to its demand, serving
// its own client for free.  Cross costs keep the matrix metric in metric
// mode (cheapest two-leg detour through a real facility) and equal the
// largest input entry in general mode.  Accepts tmc and utmc input; metric
// mode additionally requires a metric cost matrix.
Reduction tmc_to_cfl(const Instance& inst, CostMode mode);

// Same dummy-facility gadget applied to cflmc: real facilities keep their
// opening costs, and the result is a plain cfl instance.
Reduction cflmc_to_cfl(const Instance& inst, CostMode mode);

// Uncapacitated variant: utmc in, ufl out.  Dummy facilities get capacity
// equal to the total demand so that no capacity binds.  Metric costs only.
Reduction utmc_to_ufl(const Instance& inst);

// Facility location to market choice: one dummy client per facility with
// demand equal to the capacity and penalty equal to the opening cost, served
// by its own facility for free.  Real clients get the instance upper bound
// as penalty, making rejection of any of them a dominated choice.  Requires
// kind cfl with total capacity covering total demand.
Reduction cfl_to_tmc(const Instance& inst, CostMode mode);

// Rebuilds the original instance a certificate was issued for from the
// reduced instance it accompanies.
Instance reconstruct_original(const ReductionCertificate& cert,
                              const Instance& reduced);

// Cost-non-increasing cleanup of a feasible solution of a reduced instance
// from a dummy-facility direction: opens every facility whose opening cost
// is zero, then repeatedly swaps flow pairwise so that open dummy facilities
// serve their own client before anyone else's.  Swaps preserve each
// facility's shipped total and each client's received total exactly.
Solution normalize_dummy_service(const Instance& reduced, const Solution& sol,
                                 const ReductionCertificate& cert);

// Back-translation for the dummy-facility directions (tmc_to_cfl,
// utmc_to_ufl, cflmc_to_cfl): a feasible solution of the reduced instance
// becomes a feasible solution of the original of no greater objective.
// Clients whose dummy facility is open become unserved; the remaining demand
// is rerouted by one residual transportation solve.
Solution translate_cfl_solution_to_tmc(const ReductionCertificate& cert,
                                       const Instance& reduced,
                                       const Solution& sol);

// Back-translation for cfl_to_tmc.  Facilities whose dummy client pays its
// penalty are the ones to open.  Solutions at or above the baked-in upper
// bound are first replaced by the all-open routing, which always lands
// strictly below the bound, so the output never costs more than the input.
Solution translate_tmc_solution_to_cfl(const ReductionCertificate& cert,
                                       const Instance& reduced,
                                       const Solution& sol);

// Dispatch on the certificate's direction.
Solution translate_solution(const ReductionCertificate& cert,
                            const Instance& reduced, const Solution& sol);

}  // namespace flmc
