#pragma once

#include <vector>

namespace lot::detail {

/// Exact maximization over the transportation polytope:
///   max sum_{a,b} flow_ab * cost_ab
///   s.t. row sums = supply, col sums = demand, flow >= 0,
/// where cost = -inf marks a forbidden arc (removed from the graph, never
/// given a numeric penalty). Solved by a primal network simplex on the
/// bipartite support graph, started from an all-artificial star through a
/// root node whose arcs dominate every real cost lexicographically: the
/// solver first minimizes artificial flow exactly (so infeasible instances
/// end at a maximal-mass partial routing) and then maximizes the real
/// objective.
struct TransportSolution {
  std::vector<double> flow;  // m x n row-major; artificial flow excluded
  bool feasible = false;     // all mass routed over real arcs
  double shipped = 0.0;      // mass routed over real arcs (== 1 when feasible)
  double objective = 0.0;    // sum flow * cost over real arcs
  std::vector<double> u;     // dual potentials, sources
  std::vector<double> v;     // dual potentials, sinks
  bool duals_valid = false;  // u_a + v_b >= c_ab on allowed arcs, = on support
  long pivots = 0;
};

TransportSolution solve_transport_max(int m, int n, const std::vector<double>& supply,
                                      const std::vector<double>& demand,
                                      const std::vector<double>& cost, double pivot_tol);

/// Independent dual construction for a given flow by difference-constraint
/// relaxation: feasible max-form potentials with equality on the support.
/// Returns false when none exist, i.e. the flow is not optimal.
bool transport_duals(int m, int n, const std::vector<double>& cost,
                     const std::vector<double>& flow, double support_eps,
                     std::vector<double>& u, std::vector<double>& v);

}  // namespace lot::detail
