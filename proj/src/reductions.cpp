#include "flmc/reductions.hpp"

#include <algorithm>

#include "flmc/transport.hpp"

namespace flmc {

const char* direction_name(ReductionDirection d) {
  switch (d) {
    case ReductionDirection::tmc_to_cfl: return "tmc_to_cfl";
    case ReductionDirection::cfl_to_tmc: return "cfl_to_tmc";
    case ReductionDirection::utmc_to_ufl: return "utmc_to_ufl";
    case ReductionDirection::cflmc_to_cfl: return "cflmc_to_cfl";
  }
  throw std::logic_error("unreachable direction");
}

ReductionDirection direction_from_name(const std::string& name) {
  if (name == "tmc_to_cfl") return ReductionDirection::tmc_to_cfl;
  if (name == "cfl_to_tmc") return ReductionDirection::cfl_to_tmc;
  if (name == "utmc_to_ufl") return ReductionDirection::utmc_to_ufl;
  if (name == "cflmc_to_cfl") return ReductionDirection::cflmc_to_cfl;
  throw std::invalid_argument("unknown reduction direction: " + name);
}

const char* cost_mode_name(CostMode m) {
  return m == CostMode::metric ? "metric" : "general";
}

CostMode cost_mode_from_name(const std::string& name) {
  if (name == "metric") return CostMode::metric;
  if (name == "general") return CostMode::general;
  throw std::invalid_argument("unknown cost mode: " + name);
}

namespace {

void require_valid(const Instance& inst, const char* who) {
  const ValidationReport report = validate_instance(inst);
  if (!report.ok()) {
    throw std::invalid_argument(std::string(who) + ": invalid instance: " + report.to_string());
  }
}

void require_metric_costs(const Instance& inst, const char* who) {
  if (!check_metric(inst.costs)) {
    throw std::invalid_argument(std::string(who) +
                                ": metric mode needs costs satisfying the four-point inequality");
  }
}

// A certificate is only trusted after its shape is checked against the
// reduced instance it claims to describe; parsed certificates can say
// anything.
void require_cert_matches(const ReductionCertificate& cert, const Instance& reduced) {
  const Index m = cert.source_num_facilities;
  const Index n = cert.source_num_clients;
  if (m < 0 || n < 0) throw std::invalid_argument("certificate has negative source dimensions");

  if (cert.direction == ReductionDirection::cfl_to_tmc) {
    if (!cert.iub) throw std::invalid_argument("certificate lacks its upper bound");
    if (reduced.kind != Kind::tmc || reduced.num_facilities() != m ||
        reduced.num_clients() != n + m || static_cast<Index>(cert.dummy_map.size()) != m) {
      throw std::invalid_argument("certificate does not match the reduced instance");
    }
    for (Index k = 0; k < m; ++k) {
      if (cert.dummy_map[static_cast<size_t>(k)] != std::make_pair(n + k, k)) {
        throw std::invalid_argument("certificate dummy map is not the expected client block");
      }
    }
    return;
  }

  if (cert.iub) throw std::invalid_argument("certificate carries an upper bound it should not");
  const Kind expected =
      cert.direction == ReductionDirection::utmc_to_ufl ? Kind::ufl : Kind::cfl;
  if (reduced.kind != expected || reduced.num_facilities() != m + n ||
      reduced.num_clients() != n || static_cast<Index>(cert.dummy_map.size()) != n) {
    throw std::invalid_argument("certificate does not match the reduced instance");
  }
  for (Index k = 0; k < n; ++k) {
    if (cert.dummy_map[static_cast<size_t>(k)] != std::make_pair(m + k, k)) {
      throw std::invalid_argument("certificate dummy map is not the expected facility block");
    }
  }
}

// Shared gadget for the three market-choice-to-location directions: one
// dummy facility per client, opening cost equal to the penalty, serving its
// own client for free.  In metric mode the cross cost from client j's dummy
// to client j0 is the cheapest two-leg detour through a real facility,
//   min_i (c(i, j0) + c(i, j)),
// which keeps the whole matrix metric; with no real facilities the minimum
// is taken as zero, which is metric too.  In general mode every cross cost
// is the largest input entry.
Reduction build_dummy_facilities(const Instance& inst, CostMode mode, Kind out_kind,
                                 bool uncapacitated_dummies, ReductionDirection dir) {
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();

  Instance out;
  out.kind = out_kind;
  out.capacities.resize(m + n);
  out.capacities.head(m) = inst.capacities;
  if (uncapacitated_dummies) {
    out.capacities.tail(n).setConstant(inst.total_demand());
  } else {
    out.capacities.tail(n) = inst.demands;
  }
  out.opening_costs = MoneyVector::Zero(m + n);
  if (kind_has_opening_costs(inst.kind)) {
    out.opening_costs.head(m) = inst.opening_costs;
  }
  out.opening_costs.tail(n) = inst.penalties;
  out.demands = inst.demands;
  out.penalties.resize(0);

  const Money ceiling = inst.costs.size() > 0 ? inst.costs.maxCoeff() : 0;
  out.costs.resize(m + n, n);
  out.costs.topRows(m) = inst.costs;
  for (Index j = 0; j < n; ++j) {
    for (Index j0 = 0; j0 < n; ++j0) {
      Money c = 0;
      if (j0 == j) {
        c = 0;
      } else if (mode == CostMode::general) {
        c = ceiling;
      } else {
        for (Index i = 0; i < m; ++i) {
          const Money detour = checked_add(inst.costs(i, j0), inst.costs(i, j));
          if (i == 0 || detour < c) c = detour;
        }
      }
      out.costs(m + j, j0) = c;
    }
  }
  out.metric_claim = mode == CostMode::metric;

  Reduction red;
  red.instance = std::move(out);
  red.certificate.direction = dir;
  red.certificate.mode = mode;
  red.certificate.dummy_map.reserve(static_cast<size_t>(n));
  for (Index j = 0; j < n; ++j) red.certificate.dummy_map.emplace_back(m + j, j);
  red.certificate.source_num_facilities = m;
  red.certificate.source_num_clients = n;
  return red;
}

}  // namespace

Reduction tmc_to_cfl(const Instance& inst, CostMode mode) {
  require_valid(inst, "tmc_to_cfl");
  if (inst.kind != Kind::tmc && inst.kind != Kind::utmc) {
    throw std::invalid_argument(std::string("tmc_to_cfl expects tmc or utmc, got ") +
                                kind_name(inst.kind));
  }
  if (mode == CostMode::metric) require_metric_costs(inst, "tmc_to_cfl");
  return build_dummy_facilities(inst, mode, Kind::cfl, false,
                                ReductionDirection::tmc_to_cfl);
}

Reduction cflmc_to_cfl(const Instance& inst, CostMode mode) {
  require_valid(inst, "cflmc_to_cfl");
  if (inst.kind != Kind::cflmc) {
    throw std::invalid_argument(std::string("cflmc_to_cfl expects cflmc, got ") +
                                kind_name(inst.kind));
  }
  if (mode == CostMode::metric) require_metric_costs(inst, "cflmc_to_cfl");
  return build_dummy_facilities(inst, mode, Kind::cfl, false,
                                ReductionDirection::cflmc_to_cfl);
}

Reduction utmc_to_ufl(const Instance& inst) {
  require_valid(inst, "utmc_to_ufl");
  if (inst.kind != Kind::utmc) {
    throw std::invalid_argument(std::string("utmc_to_ufl expects utmc, got ") +
                                kind_name(inst.kind));
  }
  require_metric_costs(inst, "utmc_to_ufl");
  return build_dummy_facilities(inst, CostMode::metric, Kind::ufl, true,
                                ReductionDirection::utmc_to_ufl);
}

Reduction cfl_to_tmc(const Instance& inst, CostMode mode) {
  require_valid(inst, "cfl_to_tmc");
  if (inst.kind != Kind::cfl) {
    throw std::invalid_argument(std::string("cfl_to_tmc expects cfl, got ") +
                                kind_name(inst.kind));
  }
  if (mode == CostMode::metric) require_metric_costs(inst, "cfl_to_tmc");
  if (!feasible_cfl(inst)) {
    throw std::invalid_argument("cfl_to_tmc: total capacity does not cover total demand");
  }
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();
  const Money iub = instance_upper_bound(inst);

  // One dummy client per facility: demand equal to the capacity, penalty
  // equal to the opening cost, served by its own facility for free.  Leaving
  // facility i's dummy unserved is exactly the decision to open i.  Real
  // clients get the strict upper bound as penalty, so any solution that
  // rejects one of them costs at least the bound and is never optimal.
  Instance out;
  out.kind = Kind::tmc;
  out.capacities = inst.capacities;
  out.opening_costs.resize(0);
  out.demands.resize(n + m);
  out.demands.head(n) = inst.demands;
  out.demands.tail(m) = inst.capacities;
  out.penalties.resize(n + m);
  out.penalties.head(n).setConstant(iub);
  out.penalties.tail(m) = inst.opening_costs;

  const Money ceiling = inst.costs.size() > 0 ? inst.costs.maxCoeff() : 0;
  out.costs.resize(m, n + m);
  out.costs.leftCols(n) = inst.costs;
  for (Index i = 0; i < m; ++i) {
    for (Index i1 = 0; i1 < m; ++i1) {
      Money c = 0;
      if (i1 == i) {
        c = 0;
      } else if (mode == CostMode::general) {
        c = ceiling;
      } else {
        // cheapest two-leg detour through a real client
        for (Index j = 0; j < n; ++j) {
          const Money detour = checked_add(inst.costs(i1, j), inst.costs(i, j));
          if (j == 0 || detour < c) c = detour;
        }
      }
      out.costs(i1, n + i) = c;
    }
  }
  out.metric_claim = mode == CostMode::metric;

  Reduction red;
  red.instance = std::move(out);
  red.certificate.direction = ReductionDirection::cfl_to_tmc;
  red.certificate.mode = mode;
  red.certificate.dummy_map.reserve(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) red.certificate.dummy_map.emplace_back(n + i, i);
  red.certificate.iub = iub;
  red.certificate.source_num_facilities = m;
  red.certificate.source_num_clients = n;
  return red;
}

Instance reconstruct_original(const ReductionCertificate& cert, const Instance& reduced) {
  require_valid(reduced, "reconstruct_original");
  require_cert_matches(cert, reduced);
  const Index m = cert.source_num_facilities;
  const Index n = cert.source_num_clients;

  Instance orig;
  if (cert.direction == ReductionDirection::cfl_to_tmc) {
    orig.kind = Kind::cfl;
    orig.capacities = reduced.capacities;
    orig.opening_costs = reduced.penalties.tail(m);
    orig.demands = reduced.demands.head(n);
    orig.penalties.resize(0);
    orig.costs = reduced.costs.leftCols(n);
  } else {
    // A utmc source reduced via tmc_to_cfl comes back under the tmc view;
    // the two kinds evaluate solutions identically.
    switch (cert.direction) {
      case ReductionDirection::tmc_to_cfl: orig.kind = Kind::tmc; break;
      case ReductionDirection::utmc_to_ufl: orig.kind = Kind::utmc; break;
      default: orig.kind = Kind::cflmc; break;
    }
    orig.capacities = reduced.capacities.head(m);
    if (kind_has_opening_costs(orig.kind)) {
      orig.opening_costs = reduced.opening_costs.head(m);
    } else {
      orig.opening_costs.resize(0);
    }
    orig.demands = reduced.demands;
    orig.penalties = reduced.opening_costs.tail(n);
    orig.costs = reduced.costs.topRows(m);
  }
  orig.metric_claim = cert.mode == CostMode::metric;
  return orig;
}

Solution normalize_dummy_service(const Instance& reduced, const Solution& sol,
                                 const ReductionCertificate& cert) {
  if (cert.direction == ReductionDirection::cfl_to_tmc) {
    throw std::invalid_argument(
        "normalize_dummy_service applies to the dummy-facility directions");
  }
  require_valid(reduced, "normalize_dummy_service");
  require_cert_matches(cert, reduced);
  {
    const EvalResult in = evaluate(reduced, sol);
    if (!in.ok()) {
      throw std::invalid_argument("normalize_dummy_service: infeasible solution: " +
                                  in.report.to_string());
    }
  }
  const Index facilities = reduced.num_facilities();
  const Index n = reduced.num_clients();

  FlowMatrix x = flows_to_matrix(facilities, n, sol.flows);
  std::vector<char> open(static_cast<size_t>(facilities), 0);
  for (Index i : sol.open) open[static_cast<size_t>(i)] = 1;
  // Opening a free facility can only help, and the later translation needs
  // every zero-penalty dummy available.
  for (Index i = 0; i < facilities; ++i) {
    if (reduced.opening_costs(i) == 0) open[static_cast<size_t>(i)] = 1;
  }

  // Pull each open dummy onto its own client by swapping flow pairs.  A swap
  // moves one unit of the dummy's foreign service and one unit of someone
  // else's service of the dummy's client across, so row and column sums
  // never change, and the cost never rises: the dummy serves its own client
  // for free, and the four-point inequality (or the flat ceiling, in general
  // mode) bounds the partner's new cost by the two old ones.
  for (const auto& [dummy, own_client] : cert.dummy_map) {
    if (!open[static_cast<size_t>(dummy)]) continue;
    const Units target = reduced.demands(own_client);
    while (x(dummy, own_client) < target) {
      Index foreign = -1;
      for (Index j = 0; j < n; ++j) {
        if (j != own_client && x(dummy, j) > 0) {
          foreign = j;
          break;
        }
      }
      if (foreign < 0) break;  // the dummy serves nobody else; nothing to pull
      Index partner = -1;
      for (Index i = 0; i < facilities; ++i) {
        if (i != dummy && x(i, own_client) > 0) {
          partner = i;
          break;
        }
      }
      if (partner < 0) break;  // fully served by the dummy already
      const Units delta = std::min(x(dummy, foreign), x(partner, own_client));
      x(dummy, own_client) += delta;
      x(partner, foreign) += delta;
      x(dummy, foreign) -= delta;
      x(partner, own_client) -= delta;
    }
  }

  Solution out;
  out.flows = matrix_to_flows(x);
  out.unserved = sol.unserved;
  for (Index i = 0; i < facilities; ++i) {
    if (open[static_cast<size_t>(i)]) out.open.push_back(i);
  }
  const EvalResult res = evaluate(reduced, out);
  if (!res.ok()) {
    throw std::logic_error("normalize_dummy_service broke feasibility: " + res.report.to_string());
  }
  out.objective = res.value;
  return out;
}

Solution translate_cfl_solution_to_tmc(const ReductionCertificate& cert,
                                       const Instance& reduced, const Solution& sol) {
  if (cert.direction == ReductionDirection::cfl_to_tmc) {
    throw std::invalid_argument("translate_cfl_solution_to_tmc handles the dummy-facility "
                                "directions; use translate_tmc_solution_to_cfl");
  }
  const Instance original = reconstruct_original(cert, reduced);
  const Solution norm = normalize_dummy_service(reduced, sol, cert);
  const Index m = cert.source_num_facilities;

  std::vector<char> open(static_cast<size_t>(reduced.num_facilities()), 0);
  for (Index i : norm.open) open[static_cast<size_t>(i)] = 1;

  Solution out;
  // A client whose dummy is open pays its penalty instead of being served;
  // zero-demand clients have nothing to reject and stay served for free.
  for (const auto& [dummy, client] : cert.dummy_map) {
    if (open[static_cast<size_t>(dummy)] && original.demands(client) > 0) {
      out.unserved.push_back(client);
    }
  }
  if (original.kind == Kind::cflmc) {
    for (Index i : norm.open) {
      if (i < m) out.open.push_back(i);
    }
  }

  // Everyone else is rerouted from scratch through the original facilities.
  // After normalization the dummies carry no service that matters: in the
  // capacitated gadgets a dummy serving its own client in full has no spare
  // capacity, and in the uncapacitated one every leftover foreign unit has a
  // real facility at most as expensive (the detour witness), so the optimal
  // residual routing costs no more than the flows it replaces.
  Solution fixed;
  fixed.unserved = out.unserved;
  fixed.open = out.open;
  const TransportResult t = residual_transport(original, fixed);
  if (!t.feasible) {
    throw std::logic_error("translate_cfl_solution_to_tmc: residual routing infeasible");
  }
  out.flows = matrix_to_flows(t.flows);
  const EvalResult res = evaluate(original, out);
  if (!res.ok()) {
    throw std::logic_error("translate_cfl_solution_to_tmc produced an infeasible solution: " +
                           res.report.to_string());
  }
  out.objective = res.value;
  return out;
}

Solution translate_tmc_solution_to_cfl(const ReductionCertificate& cert,
                                       const Instance& reduced, const Solution& sol) {
  if (cert.direction != ReductionDirection::cfl_to_tmc) {
    throw std::invalid_argument("translate_tmc_solution_to_cfl handles the cfl_to_tmc "
                                "direction; use translate_cfl_solution_to_tmc");
  }
  const Instance original = reconstruct_original(cert, reduced);
  const Index m = cert.source_num_facilities;
  const Index n = cert.source_num_clients;

  Solution work = sol;
  {
    const EvalResult in = evaluate(reduced, work);
    if (!in.ok()) {
      throw std::invalid_argument("translate_tmc_solution_to_cfl: infeasible solution: " +
                                  in.report.to_string());
    }
    if (in.value >= *cert.iub) {
      // Anything at or above the bound is dominated by the plainest answer:
      // open everything, reject every dummy, route all real demand.  That
      // costs at most the bound minus one by construction of the bound.
      Solution fixed;
      for (const auto& [dummy, facility] : cert.dummy_map) {
        (void)facility;
        if (reduced.demands(dummy) > 0) fixed.unserved.push_back(dummy);
      }
      const TransportResult t = residual_transport(reduced, fixed);
      if (!t.feasible) {
        throw std::logic_error("translate_tmc_solution_to_cfl: all-open routing infeasible");
      }
      work.flows = matrix_to_flows(t.flows);
      work.unserved = fixed.unserved;
      work.open.clear();
      const EvalResult fb = evaluate(reduced, work);
      if (!fb.ok()) {
        throw std::logic_error("translate_tmc_solution_to_cfl: bad fallback: " +
                               fb.report.to_string());
      }
      work.objective = fb.value;
    }
  }

  // Below the bound no real client is unserved (each one's penalty alone is
  // the bound), so work rejects dummies only.
  FlowMatrix x = flows_to_matrix(m, n + m, work.flows);
  std::vector<char> unserved(static_cast<size_t>(n + m), 0);
  for (Index j : work.unserved) unserved[static_cast<size_t>(j)] = 1;

  // Facility-side counterpart of normalize_dummy_service: each served dummy
  // client ends up served entirely by its own facility, which then has no
  // capacity left for anything else and can be closed.  Swaps are covered by
  // the four-point inequality (or the ceiling); when the facility has no
  // foreign flow to swap away, it simply takes the whole dummy over, which
  // only deletes paid service.
  for (const auto& [dummy, facility] : cert.dummy_map) {
    if (unserved[static_cast<size_t>(dummy)]) continue;
    const Units target = reduced.demands(dummy);
    while (x(facility, dummy) < target) {
      Index partner = -1;
      for (Index i = 0; i < m; ++i) {
        if (i != facility && x(i, dummy) > 0) {
          partner = i;
          break;
        }
      }
      if (partner < 0) break;  // served in full by its own facility
      Index foreign = -1;
      for (Index j = 0; j < n + m; ++j) {
        if (j != dummy && x(facility, j) > 0) {
          foreign = j;
          break;
        }
      }
      if (foreign >= 0) {
        const Units delta = std::min(x(facility, foreign), x(partner, dummy));
        x(facility, dummy) += delta;
        x(partner, foreign) += delta;
        x(facility, foreign) -= delta;
        x(partner, dummy) -= delta;
      } else {
        for (Index i = 0; i < m; ++i) {
          if (i != facility) x(i, dummy) = 0;
        }
        x(facility, dummy) = target;
        break;
      }
    }
  }

  Solution out;
  for (const auto& [dummy, facility] : cert.dummy_map) {
    if (unserved[static_cast<size_t>(dummy)]) out.open.push_back(facility);
  }
  out.flows = matrix_to_flows(x.leftCols(n));
  const EvalResult res = evaluate(original, out);
  if (!res.ok()) {
    throw std::logic_error("translate_tmc_solution_to_cfl produced an infeasible solution: " +
                           res.report.to_string());
  }
  out.objective = res.value;
  return out;
}

Solution translate_solution(const ReductionCertificate& cert, const Instance& reduced,
                            const Solution& sol) {
  if (cert.direction == ReductionDirection::cfl_to_tmc) {
    return translate_tmc_solution_to_cfl(cert, reduced, sol);
  }
  return translate_cfl_solution_to_tmc(cert, reduced, sol);
}

}  // namespace flmc
