#include "flmc/transport.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace flmc {

namespace {

// Distances and potentials live in 128 bits: a reduced cost is at most the
// total transport cost, which itself is bounded by int64 * int64.
using Wide = __int128;

constexpr Wide kInf = Wide(1) << 120;

void check_inputs(const UnitsVector& supplies, const UnitsVector& demands,
                  const CostMatrix& costs) {
  if (costs.rows() != supplies.size() || costs.cols() != demands.size()) {
    throw std::invalid_argument("cost matrix shape does not match supplies and demands");
  }
  for (Index i = 0; i < supplies.size(); ++i) {
    if (supplies(i) < 0) throw std::invalid_argument("negative supply");
  }
  for (Index j = 0; j < demands.size(); ++j) {
    if (demands(j) < 0) throw std::invalid_argument("negative demand");
  }
  for (Index i = 0; i < costs.rows(); ++i) {
    for (Index j = 0; j < costs.cols(); ++j) {
      if (costs(i, j) < 0) throw std::invalid_argument("negative transport cost");
    }
  }
}

// Successive shortest augmenting paths on the source / facilities / clients /
// sink network, with node potentials keeping reduced costs non-negative so
// plain Dijkstra finds each path.  Everything is integer arithmetic and every
// tie is broken toward the smaller node index (both when extracting the next
// Dijkstra node and when choosing a parent among equal-length relaxations),
// so a given input always produces the same flow matrix, and scaling all
// costs by a positive factor scales every comparison uniformly and leaves
// that matrix unchanged.
//
// Nodes: 0 is the source, 1..m the facilities, m+1..m+n the clients,
// m+n+1 the sink.
class SspSolver {
 public:
  SspSolver(const UnitsVector& supplies, const UnitsVector& demands, const CostMatrix& costs)
      : m_(supplies.size()),
        n_(demands.size()),
        supplies_(supplies),
        demands_(demands),
        costs_(costs),
        x_(FlowMatrix::Zero(m_, n_)),
        shipped_(UnitsVector::Zero(m_)),
        received_(UnitsVector::Zero(n_)),
        total_demand_(checked_sum(demands)),
        pot_(static_cast<size_t>(m_ + n_ + 2), 0),
        dist_(static_cast<size_t>(m_ + n_ + 2), kInf),
        parent_(static_cast<size_t>(m_ + n_ + 2), -1) {}

  FlowMatrix run() {
    Units served = 0;
    while (served < total_demand_) {
      dijkstra();
      if (dist_[static_cast<size_t>(sink())] >= kInf) {
        // The caller checked total supply against total demand, and the
        // bipartite graph is complete, so a path must exist.
        throw std::logic_error("transport: no augmenting path on a feasible input");
      }
      served += augment();
      const Wide reached = dist_[static_cast<size_t>(sink())];
      for (size_t v = 0; v < pot_.size(); ++v) {
        pot_[v] += std::min(dist_[v], reached);
      }
    }
    return x_;
  }

 private:
  Index fac(Index i) const { return 1 + i; }
  Index cli(Index j) const { return 1 + m_ + j; }
  Index sink() const { return 1 + m_ + n_; }

  // Visits the residual out-arcs of u in ascending head order with the raw
  // (unreduced) arc cost.
  template <typename F>
  void for_each_residual(Index u, F&& visit) const {
    if (u == 0) {
      for (Index i = 0; i < m_; ++i) {
        if (supplies_(i) - shipped_(i) > 0) visit(fac(i), Wide(0));
      }
    } else if (u <= m_) {
      const Index i = u - 1;
      if (shipped_(i) > 0) visit(0, Wide(0));
      for (Index j = 0; j < n_; ++j) {
        visit(cli(j), Wide(costs_(i, j)));
      }
    } else if (u <= m_ + n_) {
      const Index j = u - 1 - m_;
      for (Index i = 0; i < m_; ++i) {
        if (x_(i, j) > 0) visit(fac(i), -Wide(costs_(i, j)));
      }
      if (demands_(j) - received_(j) > 0) visit(sink(), Wide(0));
    } else {
      for (Index j = 0; j < n_; ++j) {
        if (received_(j) > 0) visit(cli(j), Wide(0));
      }
    }
  }

  // The node pair determines the arc type, so capacities need no bookkeeping
  // beyond the flow matrix and its margins.  Facility-to-client arcs are
  // unbounded; the source and sink arcs cap every augmentation anyway.
  Units residual_cap(Index u, Index v) const {
    if (u == 0) return supplies_(v - 1) - shipped_(v - 1);
    if (v == 0) return shipped_(u - 1);
    if (v == sink()) return demands_(u - 1 - m_) - received_(u - 1 - m_);
    if (u <= m_) return total_demand_;
    return x_(v - 1, u - 1 - m_);
  }

  void apply(Index u, Index v, Units delta) {
    if (u == 0) {
      shipped_(v - 1) += delta;
    } else if (v == 0) {
      shipped_(u - 1) -= delta;
    } else if (v == sink()) {
      received_(u - 1 - m_) += delta;
    } else if (u <= m_) {
      x_(u - 1, v - 1 - m_) += delta;
    } else {
      x_(v - 1, u - 1 - m_) -= delta;
    }
  }

  void dijkstra() {
    const Index nodes = m_ + n_ + 2;
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(parent_.begin(), parent_.end(), Index(-1));
    std::vector<char> done(static_cast<size_t>(nodes), 0);
    dist_[0] = 0;
    for (;;) {
      Index u = -1;
      for (Index v = 0; v < nodes; ++v) {
        if (!done[static_cast<size_t>(v)] && dist_[static_cast<size_t>(v)] < kInf &&
            (u < 0 || dist_[static_cast<size_t>(v)] < dist_[static_cast<size_t>(u)])) {
          u = v;
        }
      }
      if (u < 0) break;
      done[static_cast<size_t>(u)] = 1;
      for_each_residual(u, [&](Index v, Wide cost) {
        if (done[static_cast<size_t>(v)]) return;
        const Wide nd = dist_[static_cast<size_t>(u)] + cost +
                        pot_[static_cast<size_t>(u)] - pot_[static_cast<size_t>(v)];
        if (nd < dist_[static_cast<size_t>(v)] ||
            (nd == dist_[static_cast<size_t>(v)] && u < parent_[static_cast<size_t>(v)])) {
          dist_[static_cast<size_t>(v)] = nd;
          parent_[static_cast<size_t>(v)] = u;
        }
      });
    }
  }

  Units augment() {
    std::vector<Index> path;
    for (Index v = sink(); v != 0; v = parent_[static_cast<size_t>(v)]) {
      path.push_back(v);
    }
    path.push_back(0);
    std::reverse(path.begin(), path.end());

    Units delta = std::numeric_limits<Units>::max();
    for (size_t k = 0; k + 1 < path.size(); ++k) {
      delta = std::min(delta, residual_cap(path[k], path[k + 1]));
    }
    for (size_t k = 0; k + 1 < path.size(); ++k) {
      apply(path[k], path[k + 1], delta);
    }
    return delta;
  }

  Index m_, n_;
  const UnitsVector& supplies_;
  const UnitsVector& demands_;
  const CostMatrix& costs_;
  FlowMatrix x_;
  UnitsVector shipped_, received_;
  Units total_demand_;
  std::vector<Wide> pot_, dist_;
  std::vector<Index> parent_;
};

Money flow_cost(const CostMatrix& costs, const FlowMatrix& x) {
  Money total = 0;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (x(i, j) != 0) total = checked_add(total, checked_mul(costs(i, j), x(i, j)));
    }
  }
  return total;
}

}  // namespace

TransportResult min_cost_transport(const UnitsVector& supplies, const UnitsVector& demands,
                                   const CostMatrix& costs) {
  check_inputs(supplies, demands, costs);
  TransportResult result;
  result.flows = FlowMatrix::Zero(supplies.size(), demands.size());
  if (checked_sum(demands) > checked_sum(supplies)) {
    result.feasible = false;
    return result;
  }
  result.feasible = true;
  SspSolver solver(supplies, demands, costs);
  result.flows = solver.run();
  result.total_cost = flow_cost(costs, result.flows);
  return result;
}

Money max_value_transport(const UnitsVector& supplies, const UnitsVector& demands,
                          const CostMatrix& costs) {
  check_inputs(supplies, demands, costs);
  const Units total_demand = checked_sum(demands);
  if (total_demand > checked_sum(supplies)) {
    throw std::invalid_argument("max_value_transport: demand exceeds supply");
  }
  const Money ceiling = costs.size() > 0 ? costs.maxCoeff() : 0;
  // Complementing against the largest entry turns maximization into the
  // minimization above: max sum(c x) = ceiling * demand - min sum((ceiling - c) x).
  const CostMatrix complement = (ceiling - costs.array()).matrix();
  const TransportResult r = min_cost_transport(supplies, demands, complement);
  return checked_mul(ceiling, total_demand) - r.total_cost;
}

TransportResult residual_transport(const Instance& inst, const Solution& fixed) {
  {
    const ValidationReport report = validate_instance(inst);
    if (!report.ok()) throw std::invalid_argument("invalid instance: " + report.to_string());
  }
  const Index m = inst.num_facilities();
  const Index n = inst.num_clients();
  const FlowMatrix x = flows_to_matrix(m, n, fixed.flows);

  std::vector<char> open(static_cast<size_t>(m), 0);
  for (Index i : fixed.open) {
    if (i < 0 || i >= m) throw std::invalid_argument("open index out of range");
    open[static_cast<size_t>(i)] = 1;
  }
  std::vector<char> unserved(static_cast<size_t>(n), 0);
  for (Index j : fixed.unserved) {
    if (j < 0 || j >= n) throw std::invalid_argument("unserved index out of range");
    unserved[static_cast<size_t>(j)] = 1;
  }

  const bool openings = kind_has_opening_costs(inst.kind);
  UnitsVector supplies(m);
  for (Index i = 0; i < m; ++i) {
    const Units used = checked_sum(x.row(i));
    if (used > inst.capacities(i)) {
      throw std::invalid_argument("fixed flows exceed the capacity of facility " + std::to_string(i));
    }
    if (openings && !open[static_cast<size_t>(i)] && used > 0) {
      throw std::invalid_argument("fixed flows leave closed facility " + std::to_string(i));
    }
    supplies(i) = (openings && !open[static_cast<size_t>(i)]) ? 0 : inst.capacities(i) - used;
  }
  UnitsVector wanted(n);
  for (Index j = 0; j < n; ++j) {
    const Units got = checked_sum(x.col(j));
    if (unserved[static_cast<size_t>(j)]) {
      if (got > 0) {
        throw std::invalid_argument("unserved client " + std::to_string(j) + " already receives flow");
      }
      wanted(j) = 0;
    } else {
      if (got > inst.demands(j)) {
        throw std::invalid_argument("fixed flows exceed the demand of client " + std::to_string(j));
      }
      wanted(j) = inst.demands(j) - got;
    }
  }
  return min_cost_transport(supplies, wanted, inst.costs);
}

}  // namespace flmc
