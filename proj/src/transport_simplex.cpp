#include "lot/detail/transport_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lot/errors.hpp"

namespace lot::detail {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Two-level cost: the artificial component dominates the real one, so the
// simplex drives artificial flow to its exact minimum before optimizing the
// real objective. Artificial components stay small integers throughout.
struct LexCost {
  double art = 0.0;
  double val = 0.0;

  LexCost operator+(const LexCost& o) const { return {art + o.art, val + o.val}; }
  LexCost operator-(const LexCost& o) const { return {art - o.art, val - o.val}; }
};

// rc "greater than tol" in the maximization sense.
inline bool lex_improving(const LexCost& rc, double tol) {
  if (rc.art > 0.5) return true;
  if (rc.art < -0.5) return false;
  return rc.val > tol;
}

inline bool lex_greater(const LexCost& a, const LexCost& b) {
  if (a.art != b.art) return a.art > b.art;
  return a.val > b.val;
}

struct Arc {
  int a;  // tail node
  int b;  // head node
  LexCost cost;
  bool artificial;
};

class Simplex {
 public:
  // Nodes: sources 0..m-1, sinks m..m+n-1, plus an artificial root m+n. The
  // initial basis is the all-artificial star through the root (source->root
  // carrying the supply, root->sink carrying the demand), so every partial
  // routing is expressible and minimizing artificial flow finds the maximal
  // real mass exactly.
  Simplex(int m, int n, const std::vector<double>& supply, const std::vector<double>& demand,
          const std::vector<double>& cost, double pivot_tol)
      : m_(m), n_(n), nodes_(m + n + 1), pivot_tol_(pivot_tol), cost_(cost) {
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < n_; ++j) {
        const double c = cost_[static_cast<std::size_t>(i) * n_ + j];
        if (c == kNegInf) continue;
        arcs_.push_back(Arc{i, m_ + j, LexCost{0.0, c}, false});
      }
    real_arcs_ = static_cast<int>(arcs_.size());

    const int root = m_ + n_;
    flow_.assign(arcs_.size(), 0.0);
    basic_.assign(arcs_.size(), 0);
    for (int i = 0; i < m_; ++i) {
      arcs_.push_back(Arc{i, root, LexCost{-1.0, 0.0}, true});
      flow_.push_back(supply[static_cast<std::size_t>(i)]);
      basic_.push_back(1);
    }
    for (int j = 0; j < n_; ++j) {
      arcs_.push_back(Arc{root, m_ + j, LexCost{-1.0, 0.0}, true});
      flow_.push_back(demand[static_cast<std::size_t>(j)]);
      basic_.push_back(1);
    }

    adj_.assign(static_cast<std::size_t>(nodes_), {});
    for (std::size_t e = 0; e < arcs_.size(); ++e)
      if (basic_[e]) attach(static_cast<int>(e));
    recompute_tree();
  }

  void run() {
    const int block = std::max(64, static_cast<int>(std::sqrt(static_cast<double>(
                                       std::max<std::size_t>(arcs_.size(), 1)))));
    long stall = 0;
    bool bland = false;
    const long stall_limit = 64L * nodes_;

    while (true) {
      const int entering = bland ? find_entering_bland() : find_entering_block(block);
      if (entering < 0) break;
      const double delta = pivot(entering, bland);
      ++pivots_;
      if (delta <= 1e-14) {
        if (++stall > stall_limit) bland = true;
      } else {
        stall = 0;
      }
    }
  }

  TransportSolution extract() {
    TransportSolution out;
    out.flow.assign(static_cast<std::size_t>(m_) * n_, 0.0);
    double art_flow = 0.0;
    int real_basic = 0;
    for (std::size_t e = 0; e < arcs_.size(); ++e) {
      const double f = std::max(0.0, flow_[e]);
      if (arcs_[e].artificial) {
        art_flow += f;
        continue;
      }
      real_basic += basic_[e] ? 1 : 0;
      out.flow[static_cast<std::size_t>(arcs_[e].a) * n_ + (arcs_[e].b - m_)] = f;
      out.shipped += f;
      out.objective += f * arcs_[e].cost.val;
    }
    out.feasible = art_flow <= 1e-12;
    out.pivots = pivots_;

    if (out.feasible) {
      if (real_basic == m_ + n_ - 1) {
        // The real basis spans every bipartite node, so no path between them
        // crosses the root: the tree potentials are clean duals
        // (u = pot on sources, v = -pot on sinks).
        out.u.resize(static_cast<std::size_t>(m_));
        out.v.resize(static_cast<std::size_t>(n_));
        for (int i = 0; i < m_; ++i)
          out.u[static_cast<std::size_t>(i)] = pot_[static_cast<std::size_t>(i)].val;
        for (int j = 0; j < n_; ++j)
          out.v[static_cast<std::size_t>(j)] = -pot_[static_cast<std::size_t>(m_ + j)].val;
        out.duals_valid = true;
      } else {
        // Degenerate zero-flow artificial arcs split the real basis into
        // components with free potential shifts; rebuild duals independently.
        out.duals_valid = transport_duals(m_, n_, cost_, out.flow, 1e-14, out.u, out.v);
      }
    }
    return out;
  }

 private:
  void attach(int e) {
    adj_[static_cast<std::size_t>(arcs_[static_cast<std::size_t>(e)].a)].push_back(e);
    adj_[static_cast<std::size_t>(arcs_[static_cast<std::size_t>(e)].b)].push_back(e);
  }

  void detach(int e) {
    for (int node : {arcs_[static_cast<std::size_t>(e)].a, arcs_[static_cast<std::size_t>(e)].b}) {
      auto& list = adj_[static_cast<std::size_t>(node)];
      list.erase(std::find(list.begin(), list.end(), e));
    }
  }

  // Parent/depth/potential arrays recomputed by BFS over the basis tree.
  void recompute_tree() {
    parent_.assign(static_cast<std::size_t>(nodes_), -1);
    parent_arc_.assign(static_cast<std::size_t>(nodes_), -1);
    depth_.assign(static_cast<std::size_t>(nodes_), -1);
    pot_.assign(static_cast<std::size_t>(nodes_), LexCost{});

    std::vector<int> queue{0};
    depth_[0] = 0;
    std::size_t head = 0;
    while (head < queue.size()) {
      const int x = queue[head++];
      for (int e : adj_[static_cast<std::size_t>(x)]) {
        const Arc& arc = arcs_[static_cast<std::size_t>(e)];
        const int y = arc.a == x ? arc.b : arc.a;
        if (depth_[static_cast<std::size_t>(y)] >= 0) continue;
        depth_[static_cast<std::size_t>(y)] = depth_[static_cast<std::size_t>(x)] + 1;
        parent_[static_cast<std::size_t>(y)] = x;
        parent_arc_[static_cast<std::size_t>(y)] = e;
        // Basic arcs price to zero: cost = pot[tail] - pot[head].
        pot_[static_cast<std::size_t>(y)] = arc.a == x
                                                ? pot_[static_cast<std::size_t>(x)] - arc.cost
                                                : pot_[static_cast<std::size_t>(x)] + arc.cost;
        queue.push_back(y);
      }
    }
    for (int x = 0; x < nodes_; ++x)
      if (depth_[static_cast<std::size_t>(x)] < 0)
        throw lot::Error("transport simplex: basis tree is not spanning");
  }

  LexCost reduced_cost(int e) const {
    const Arc& arc = arcs_[static_cast<std::size_t>(e)];
    return arc.cost - pot_[static_cast<std::size_t>(arc.a)] +
           pot_[static_cast<std::size_t>(arc.b)];
  }

  int find_entering_block(int block) {
    const int total = real_arcs_;
    if (total == 0) return -1;
    int best = -1;
    LexCost best_rc{};
    int scanned = 0;
    while (scanned < total) {
      const int stop = std::min(total, cursor_ + block);
      for (int e = cursor_; e < stop; ++e) {
        if (basic_[static_cast<std::size_t>(e)]) continue;
        const LexCost rc = reduced_cost(e);
        if (lex_improving(rc, pivot_tol_) && (best < 0 || lex_greater(rc, best_rc))) {
          best = e;
          best_rc = rc;
        }
      }
      scanned += stop - cursor_;
      cursor_ = stop == total ? 0 : stop;
      if (best >= 0) return best;
    }
    return -1;
  }

  int find_entering_bland() {
    for (int e = 0; e < real_arcs_; ++e) {
      if (basic_[static_cast<std::size_t>(e)]) continue;
      if (lex_improving(reduced_cost(e), pivot_tol_)) return e;
    }
    return -1;
  }

  // Push flow around the unique basis cycle closed by the entering arc.
  double pivot(int entering, bool bland) {
    const Arc& arc = arcs_[static_cast<std::size_t>(entering)];
    cycle_arcs_.clear();
    cycle_signs_.clear();

    int x = arc.a;
    int y = arc.b;
    // Walk both endpoints to their common ancestor. Arcs on the b-side are
    // traversed with the push direction, arcs on the a-side against it.
    std::vector<int>& up_a = scratch_a_;
    std::vector<int>& up_b = scratch_b_;
    up_a.clear();
    up_b.clear();
    while (depth_[static_cast<std::size_t>(x)] > depth_[static_cast<std::size_t>(y)]) {
      up_a.push_back(parent_arc_[static_cast<std::size_t>(x)]);
      x = parent_[static_cast<std::size_t>(x)];
    }
    while (depth_[static_cast<std::size_t>(y)] > depth_[static_cast<std::size_t>(x)]) {
      up_b.push_back(parent_arc_[static_cast<std::size_t>(y)]);
      y = parent_[static_cast<std::size_t>(y)];
    }
    while (x != y) {
      up_a.push_back(parent_arc_[static_cast<std::size_t>(x)]);
      x = parent_[static_cast<std::size_t>(x)];
      up_b.push_back(parent_arc_[static_cast<std::size_t>(y)]);
      y = parent_[static_cast<std::size_t>(y)];
    }

    // Sign convention: +1 arcs gain delta, -1 arcs lose delta.
    const auto push_side = [&](const std::vector<int>& path, int start, bool with_push) {
      int node = start;
      for (int e : path) {
        const Arc& pa = arcs_[static_cast<std::size_t>(e)];
        const bool leaves_node = pa.a == node;  // arc oriented away from `node`
        // Walking up from `node`: the traversal direction is node -> parent.
        // With the push direction, alignment means gain; against, the reverse.
        const bool aligned = leaves_node;
        const int sign = (aligned == with_push) ? 1 : -1;
        cycle_arcs_.push_back(e);
        cycle_signs_.push_back(sign);
        node = pa.a == node ? pa.b : pa.a;
      }
    };
    push_side(up_b, arc.b, true);
    push_side(up_a, arc.a, false);

    double delta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t i = 0; i < cycle_arcs_.size(); ++i) {
      if (cycle_signs_[i] >= 0) continue;
      const double f = flow_[static_cast<std::size_t>(cycle_arcs_[i])];
      bool take = leaving < 0 || f < delta;
      if (!take && f == delta)
        take = bland ? cycle_arcs_[i] < leaving : true;  // last-wins off Bland
      if (take) {
        delta = f;
        leaving = cycle_arcs_[i];
      }
    }
    if (leaving < 0)
      throw lot::Error("transport simplex: unbounded pivot on a balanced problem");

    flow_[static_cast<std::size_t>(entering)] += delta;
    for (std::size_t i = 0; i < cycle_arcs_.size(); ++i)
      flow_[static_cast<std::size_t>(cycle_arcs_[i])] +=
          cycle_signs_[i] > 0 ? delta : -delta;
    flow_[static_cast<std::size_t>(leaving)] = 0.0;

    basic_[static_cast<std::size_t>(entering)] = 1;
    basic_[static_cast<std::size_t>(leaving)] = 0;
    attach(entering);
    detach(leaving);
    recompute_tree();
    return delta;
  }

  int m_, n_, nodes_;
  double pivot_tol_;
  const std::vector<double>& cost_;
  std::vector<Arc> arcs_;
  int real_arcs_ = 0;
  std::vector<double> flow_;
  std::vector<char> basic_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_, parent_arc_, depth_;
  std::vector<LexCost> pot_;
  std::vector<int> cycle_arcs_;
  std::vector<int> cycle_signs_;
  std::vector<int> scratch_a_, scratch_b_;
  int cursor_ = 0;
  long pivots_ = 0;
};

}  // namespace

TransportSolution solve_transport_max(int m, int n, const std::vector<double>& supply,
                                      const std::vector<double>& demand,
                                      const std::vector<double>& cost, double pivot_tol) {
  if (m <= 0 || n <= 0) throw lot::Error("transport: empty side");
  if (supply.size() != static_cast<std::size_t>(m) ||
      demand.size() != static_cast<std::size_t>(n) ||
      cost.size() != static_cast<std::size_t>(m) * n)
    throw lot::Error("transport: inconsistent problem sizes");
  Simplex simplex(m, n, supply, demand, cost, pivot_tol);
  simplex.run();
  return simplex.extract();
}

bool transport_duals(int m, int n, const std::vector<double>& cost,
                     const std::vector<double>& flow, double support_eps,
                     std::vector<double>& u, std::vector<double>& v) {
  // Difference constraints on w_a = u_a and z_b = -v_b:
  //   allowed arc:  z_b <= w_a - c_ab
  //   support arc:  w_a <= z_b + c_ab
  // solved by Bellman-Ford relaxation from an implicit source at 0.
  std::vector<double> w(static_cast<std::size_t>(m), 0.0);
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  const int passes = m + n + 2;
  bool changed = true;
  for (int pass = 0; pass < passes && changed; ++pass) {
    changed = false;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const double c = cost[static_cast<std::size_t>(i) * n + j];
        if (c == kNegInf) continue;
        const double zj = w[static_cast<std::size_t>(i)] - c;
        if (zj < z[static_cast<std::size_t>(j)] - 1e-13) {
          z[static_cast<std::size_t>(j)] = zj;
          changed = true;
        }
        if (flow[static_cast<std::size_t>(i) * n + j] > support_eps) {
          const double wi = z[static_cast<std::size_t>(j)] + c;
          if (wi < w[static_cast<std::size_t>(i)] - 1e-13) {
            w[static_cast<std::size_t>(i)] = wi;
            changed = true;
          }
        }
      }
    }
  }
  if (changed) return false;  // negative cycle: flow not optimal
  u = std::move(w);
  v.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = -z[static_cast<std::size_t>(j)];
  return true;
}

}  // namespace lot::detail
