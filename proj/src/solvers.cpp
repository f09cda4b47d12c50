#include "flmc/solvers.hpp"

#include <algorithm>
#include <optional>

#include "flmc/transport.hpp"

namespace flmc {

namespace {

void require_valid(const Instance& inst, const char* who) {
  const ValidationReport report = validate_instance(inst);
  if (!report.ok()) {
    throw std::invalid_argument(std::string(who) + ": invalid instance: " + report.to_string());
  }
}

void require_enumerable(Index count, Index limit, const char* who, const char* axis) {
  if (count > limit || count > 62) {
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(count) + " " + axis +
                                " exceed the enumeration limit " + std::to_string(limit));
  }
}

Solution finish(const Instance& inst, std::vector<Index> open, std::vector<Index> unserved,
                const FlowMatrix& flows, const char* who) {
  Solution s;
  s.flows = matrix_to_flows(flows);
  s.unserved = std::move(unserved);
  s.open = std::move(open);
  const EvalResult res = evaluate(inst, s);
  if (!res.ok()) {
    throw std::logic_error(std::string(who) + " built an infeasible solution: " +
                           res.report.to_string());
  }
  s.objective = res.value;
  return s;
}

std::vector<Index> mask_to_indices(std::uint64_t mask, Index size) {
  std::vector<Index> out;
  for (Index i = 0; i < size; ++i) {
    if (mask >> i & 1u) out.push_back(i);
  }
  return out;
}

}  // namespace

Solution exact_tmc(const Instance& inst, Index limit) {
  require_valid(inst, "exact_tmc");
  if (inst.kind != Kind::tmc && inst.kind != Kind::utmc) {
    throw std::invalid_argument(std::string("exact_tmc expects tmc or utmc, got ") +
                                kind_name(inst.kind));
  }
  const Index n = inst.num_clients();
  require_enumerable(n, limit, "exact_tmc", "clients");
  const Units supply_total = inst.total_supply();

  // Every subset of rejected clients, cheapest transport for the rest.  The
  // subset that rejects all positive demand is always feasible, so a best
  // one exists.  Strict improvement keeps the lowest mask among ties.
  std::optional<Money> best;
  std::uint64_t best_mask = 0;
  FlowMatrix best_flows;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    Money penalty = 0;
    UnitsVector served = inst.demands;
    bool skip = false;
    for (Index j = 0; j < n; ++j) {
      if (mask >> j & 1u) {
        if (inst.demands(j) == 0) {
          skip = true;  // nothing to reject
          break;
        }
        served(j) = 0;
        penalty = checked_add(penalty, inst.penalties(j));
      }
    }
    if (skip || checked_sum(served) > supply_total) continue;
    const TransportResult t = min_cost_transport(inst.capacities, served, inst.costs);
    const Money value = checked_add(penalty, t.total_cost);
    if (!best || value < *best) {
      best = value;
      best_mask = mask;
      best_flows = t.flows;
    }
  }
  return finish(inst, {}, mask_to_indices(best_mask, n), best_flows, "exact_tmc");
}

Solution exact_cfl(const Instance& inst, Index limit) {
  require_valid(inst, "exact_cfl");
  if (!kind_has_opening_costs(inst.kind)) {
    throw std::invalid_argument(std::string("exact_cfl expects a kind with opening costs, got ") +
                                kind_name(inst.kind));
  }
  if (!feasible_cfl(inst)) {
    throw std::invalid_argument("exact_cfl: total capacity does not cover total demand");
  }
  const Index m = inst.num_facilities();
  require_enumerable(m, limit, "exact_cfl", "facilities");
  const Units demand_total = inst.total_demand();

  // Every subset of open facilities with enough capacity, cheapest transport
  // on top.  A cflmc instance is handled in its full-service reading; its
  // penalties are simply never paid.
  std::optional<Money> best;
  std::uint64_t best_mask = 0;
  FlowMatrix best_flows;
  for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
    Money opening = 0;
    Units capacity = 0;
    UnitsVector supplies = UnitsVector::Zero(m);
    for (Index i = 0; i < m; ++i) {
      if (mask >> i & 1u) {
        supplies(i) = inst.capacities(i);
        capacity = checked_add(capacity, inst.capacities(i));
        opening = checked_add(opening, inst.opening_costs(i));
      }
    }
    if (capacity < demand_total) continue;
    const TransportResult t = min_cost_transport(supplies, inst.demands, inst.costs);
    const Money value = checked_add(opening, t.total_cost);
    if (!best || value < *best) {
      best = value;
      best_mask = mask;
      best_flows = t.flows;
    }
  }
  return finish(inst, mask_to_indices(best_mask, m), {}, best_flows, "exact_cfl");
}

Solution exact_cflmc(const Instance& inst, Index limit) {
  require_valid(inst, "exact_cflmc");
  if (inst.kind != Kind::cflmc) {
    throw std::invalid_argument(std::string("exact_cflmc expects cflmc, got ") +
                                kind_name(inst.kind));
  }
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();
  require_enumerable(m, limit, "exact_cflmc", "facilities");
  require_enumerable(n, limit, "exact_cflmc", "clients");

  // Both axes at once; rejecting everything with positive demand and opening
  // nothing is always feasible.  Ties keep the smallest (unserved, open)
  // mask pair, unserved outermost.
  std::optional<Money> best;
  std::uint64_t best_unserved = 0, best_open = 0;
  FlowMatrix best_flows;
  for (std::uint64_t umask = 0; umask < (1ull << n); ++umask) {
    Money penalty = 0;
    UnitsVector served = inst.demands;
    bool skip = false;
    for (Index j = 0; j < n; ++j) {
      if (umask >> j & 1u) {
        if (inst.demands(j) == 0) {
          skip = true;
          break;
        }
        served(j) = 0;
        penalty = checked_add(penalty, inst.penalties(j));
      }
    }
    if (skip) continue;
    const Units served_total = checked_sum(served);
    for (std::uint64_t omask = 0; omask < (1ull << m); ++omask) {
      Money opening = 0;
      Units capacity = 0;
      UnitsVector supplies = UnitsVector::Zero(m);
      for (Index i = 0; i < m; ++i) {
        if (omask >> i & 1u) {
          supplies(i) = inst.capacities(i);
          capacity = checked_add(capacity, inst.capacities(i));
          opening = checked_add(opening, inst.opening_costs(i));
        }
      }
      if (capacity < served_total) continue;
      const TransportResult t = min_cost_transport(supplies, served, inst.costs);
      const Money value = checked_add(checked_add(penalty, opening), t.total_cost);
      if (!best || value < *best) {
        best = value;
        best_unserved = umask;
        best_open = omask;
        best_flows = t.flows;
      }
    }
  }
  return finish(inst, mask_to_indices(best_open, m), mask_to_indices(best_unserved, n),
                best_flows, "exact_cflmc");
}

Solution local_search_cfl(const Instance& inst, const SolverParams& params) {
  require_valid(inst, "local_search_cfl");
  if (inst.kind != Kind::cfl && inst.kind != Kind::ufl) {
    throw std::invalid_argument(std::string("local_search_cfl expects cfl or ufl, got ") +
                                kind_name(inst.kind));
  }
  if (!feasible_cfl(inst)) {
    throw std::invalid_argument("local_search_cfl: total capacity does not cover total demand");
  }
  const Index m = inst.num_facilities();
  const Units demand_total = inst.total_demand();

  // Objective of an open mask, or nothing when its capacity falls short.
  auto cost_of = [&](const std::vector<char>& mask) -> std::optional<Money> {
    Money opening = 0;
    Units capacity = 0;
    UnitsVector supplies = UnitsVector::Zero(m);
    for (Index i = 0; i < m; ++i) {
      if (mask[static_cast<size_t>(i)]) {
        supplies(i) = inst.capacities(i);
        capacity = checked_add(capacity, inst.capacities(i));
        opening = checked_add(opening, inst.opening_costs(i));
      }
    }
    if (capacity < demand_total) return std::nullopt;
    const TransportResult t = min_cost_transport(supplies, inst.demands, inst.costs);
    return checked_add(opening, t.total_cost);
  };

  std::vector<char> open(static_cast<size_t>(m), 1);
  Money current = *cost_of(open);

  const bool try_open = params.neighborhood == Neighborhood::all ||
                        params.neighborhood == Neighborhood::open_only;
  const bool try_close = params.neighborhood == Neighborhood::all ||
                         params.neighborhood == Neighborhood::close_only;
  const bool try_swap = params.neighborhood == Neighborhood::all ||
                        params.neighborhood == Neighborhood::swap_only;

  for (int iter = 0; iter < params.max_iterations; ++iter) {
    std::optional<Money> best;
    std::vector<char> best_mask;
    auto consider = [&](std::vector<char> cand) {
      const std::optional<Money> value = cost_of(cand);
      if (value && *value < current && (!best || *value < *best)) {
        best = *value;
        best_mask = std::move(cand);
      }
    };
    if (try_open) {
      for (Index i = 0; i < m; ++i) {
        if (open[static_cast<size_t>(i)]) continue;
        std::vector<char> cand = open;
        cand[static_cast<size_t>(i)] = 1;
        consider(std::move(cand));
      }
    }
    if (try_close) {
      for (Index i = 0; i < m; ++i) {
        if (!open[static_cast<size_t>(i)]) continue;
        std::vector<char> cand = open;
        cand[static_cast<size_t>(i)] = 0;
        consider(std::move(cand));
      }
    }
    if (try_swap) {
      for (Index i = 0; i < m; ++i) {
        if (!open[static_cast<size_t>(i)]) continue;
        for (Index k = 0; k < m; ++k) {
          if (open[static_cast<size_t>(k)]) continue;
          std::vector<char> cand = open;
          cand[static_cast<size_t>(i)] = 0;
          cand[static_cast<size_t>(k)] = 1;
          consider(std::move(cand));
        }
      }
    }
    if (!best) break;  // local optimum
    open = std::move(best_mask);
    current = *best;
  }

  UnitsVector supplies = UnitsVector::Zero(m);
  std::vector<Index> opens;
  for (Index i = 0; i < m; ++i) {
    if (open[static_cast<size_t>(i)]) {
      supplies(i) = inst.capacities(i);
      opens.push_back(i);
    }
  }
  const TransportResult t = min_cost_transport(supplies, inst.demands, inst.costs);
  return finish(inst, std::move(opens), {}, t.flows, "local_search_cfl");
}

Solution greedy_ufl(const Instance& inst) {
  require_valid(inst, "greedy_ufl");
  if (inst.kind != Kind::ufl) {
    throw std::invalid_argument(std::string("greedy_ufl expects ufl, got ") +
                                kind_name(inst.kind));
  }
  if (!feasible_cfl(inst)) {
    throw std::invalid_argument("greedy_ufl: no facility to serve positive demand");
  }
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();

  std::vector<char> open(static_cast<size_t>(m), 0);
  std::vector<Index> owner(static_cast<size_t>(n), -1);
  std::vector<char> assigned(static_cast<size_t>(n), 0);
  Index outstanding = 0;
  for (Index j = 0; j < n; ++j) {
    if (inst.demands(j) > 0) ++outstanding;
  }

  // Each round commits one facility together with the prefix of its cheapest
  // waiting clients that minimizes (opening if new + serving) per client.
  // Ratios are compared by cross-multiplication in 128 bits; the first
  // candidate wins ties, so the result is deterministic.
  using Wide = __int128;
  while (outstanding > 0) {
    bool have = false;
    Wide best_num = 0, best_den = 1;
    Index best_facility = -1;
    std::vector<Index> best_prefix;

    std::vector<Index> pool;
    for (Index j = 0; j < n; ++j) {
      if (!assigned[static_cast<size_t>(j)] && inst.demands(j) > 0) pool.push_back(j);
    }
    for (Index i = 0; i < m; ++i) {
      std::vector<Index> waiting = pool;
      std::sort(waiting.begin(), waiting.end(), [&](Index a, Index b) {
        const Money ca = checked_mul(inst.costs(i, a), inst.demands(a));
        const Money cb = checked_mul(inst.costs(i, b), inst.demands(b));
        return ca != cb ? ca < cb : a < b;
      });
      Money num = open[static_cast<size_t>(i)] ? 0 : inst.opening_costs(i);
      for (size_t k = 0; k < waiting.size(); ++k) {
        num = checked_add(num, checked_mul(inst.costs(i, waiting[k]), inst.demands(waiting[k])));
        const Wide den = static_cast<Wide>(k + 1);
        if (!have || Wide(num) * best_den < best_num * den) {
          have = true;
          best_num = num;
          best_den = den;
          best_facility = i;
          best_prefix.assign(waiting.begin(), waiting.begin() + static_cast<long>(k + 1));
        }
      }
    }

    if (!have || best_facility < 0) {
      throw std::logic_error("greedy_ufl: no facility can take the waiting clients");
    }
    open[static_cast<size_t>(best_facility)] = 1;
    for (Index j : best_prefix) {
      assigned[static_cast<size_t>(j)] = 1;
      owner[static_cast<size_t>(j)] = best_facility;
    }
    outstanding -= static_cast<Index>(best_prefix.size());
  }

  FlowMatrix x = FlowMatrix::Zero(m, n);
  for (Index j = 0; j < n; ++j) {
    if (owner[static_cast<size_t>(j)] >= 0) x(owner[static_cast<size_t>(j)], j) = inst.demands(j);
  }
  std::vector<Index> opens;
  for (Index i = 0; i < m; ++i) {
    if (open[static_cast<size_t>(i)]) opens.push_back(i);
  }
  return finish(inst, std::move(opens), {}, x, "greedy_ufl");
}

Solution approx_tmc_pipeline(const Instance& inst, CostMode mode, const SolverParams& params) {
  require_valid(inst, "approx_tmc_pipeline");
  if (inst.kind != Kind::tmc && inst.kind != Kind::utmc) {
    throw std::invalid_argument(std::string("approx_tmc_pipeline expects tmc or utmc, got ") +
                                kind_name(inst.kind));
  }
  if (inst.kind == Kind::utmc && mode == CostMode::metric) {
    const Reduction red = utmc_to_ufl(inst);
    const Solution sol = greedy_ufl(red.instance);
    return translate_cfl_solution_to_tmc(red.certificate, red.instance, sol);
  }
  const Reduction red = tmc_to_cfl(inst, mode);
  const Solution sol = local_search_cfl(red.instance, params);
  return translate_cfl_solution_to_tmc(red.certificate, red.instance, sol);
}

}  // namespace flmc
