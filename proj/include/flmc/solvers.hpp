#pragma once

#include <cstdint>

#include "flmc/model.hpp"
#include "flmc/reductions.hpp"

namespace flmc {

enum class Neighborhood { open_only, close_only, swap_only, all };

struct SolverParams {
  int max_iterations = 1000;
  Neighborhood neighborhood = Neighborhood::all;
  // Reserved for randomized restarts; the plain search is deterministic and
  // ignores it.
  std::uint64_t seed = 0;
};

// Exhaustive enumeration limits.  The market-choice oracles enumerate
// 2^clients subsets, the location oracle 2^facilities, and exact_cflmc the
// product of both, hence its smaller default.
inline constexpr Index kDefaultExactLimit = 16;
inline constexpr Index kDefaultExactCflmcLimit = 10;

// Optimal market-choice solution by enumerating unserved subsets and solving
// a transportation problem for each.  Accepts tmc and utmc; throws
// std::invalid_argument beyond the limit.  Ties go to the lexicographically
// smallest unserved set.
Solution exact_tmc(const Instance& inst, Index limit = kDefaultExactLimit);

// Optimal facility-location solution by enumerating open subsets.  Accepts
// cfl and ufl, plus cflmc when every client is to be served regardless of
// penalties (the full-service relaxation used by the reduction round trip).
// Ties go to the lexicographically smallest open set.
Solution exact_cfl(const Instance& inst, Index limit = kDefaultExactLimit);

// Optimal cflmc solution over both subset axes.
Solution exact_cflmc(const Instance& inst, Index limit = kDefaultExactCflmcLimit);

// Local search for cfl and ufl: start with everything open, then apply the
// best strictly improving open / close / swap move until none exists or the
// iteration budget runs out.  Deterministic; ties between equally good moves
// go to the move enumerated first.
Solution local_search_cfl(const Instance& inst, const SolverParams& params = {});

// Classic greedy for ufl: repeatedly pick the facility-and-client-prefix
// with the smallest cost-per-newly-served-client ratio.  Ratios are compared
// exactly (cross-multiplication), never in floating point.
Solution greedy_ufl(const Instance& inst);

// End-to-end heuristic for market choice: reduce, run the matching
// heuristic on the reduced instance (greedy for the uncapacitated metric
// route, local search otherwise), translate the result back.
Solution approx_tmc_pipeline(const Instance& inst, CostMode mode,
                             const SolverParams& params = {});

}  // namespace flmc
