#include "atsp/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "atsp/error.hpp"

namespace atsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Arc list view of a NeighborDigraph with per-arc weights.
struct Arc {
  int to;
  double weight;
  bool forward;
};

std::vector<std::vector<Arc>> arcs_of(const NeighborDigraph& g, const CostMatrix& costs,
                                      const DiameterOptions& options) {
  const int n = g.n;
  std::vector<std::vector<Arc>> adj(2 * n);
  for (int x = 0; x < n; ++x) {
    for (int y : g.forward[x]) adj[x].push_back({n + y, costs(x, y), true});
    const int y = g.matching[x];
    const double back = options.charge_matching_arcs ? costs(x, y) : 0.0;
    adj[n + y].push_back({x, back, false});
  }
  return adj;
}

// Distances from a_source to all vertices; `pred` receives the tree.
std::vector<double> distances(const std::vector<std::vector<Arc>>& adj, int source,
                              DiameterMode mode, std::vector<int>* pred = nullptr) {
  const auto count = adj.size();
  std::vector<double> dist(count, kInf);
  if (pred) pred->assign(count, -1);
  dist[source] = 0.0;
  if (mode == DiameterMode::kUnweighted) {
    std::vector<int> queue{source};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int x = queue[head];
      for (const Arc& arc : adj[x]) {
        if (dist[arc.to] != kInf) continue;
        dist[arc.to] = dist[x] + 1.0;
        if (pred) (*pred)[arc.to] = x;
        queue.push_back(arc.to);
      }
    }
    return dist;
  }
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (const Arc& arc : adj[x]) {
      const double nd = d + arc.weight;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        if (pred) (*pred)[arc.to] = x;
        heap.emplace(nd, arc.to);
      }
    }
  }
  return dist;
}

// Indices of the k cheapest usable entries, ties by index.
std::vector<int> cheapest(std::vector<std::pair<double, int>> entries, int k) {
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), entries.size());
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep),
                    entries.end());
  std::vector<int> out;
  out.reserve(keep);
  for (std::size_t t = 0; t < keep; ++t) out.push_back(entries[t].second);
  return out;
}

}  // namespace

std::size_t NeighborDigraph::forward_edge_count() const {
  std::size_t total = 0;
  for (const auto& heads : forward) total += heads.size();
  return total;
}

NeighborDigraph build_neighbor_digraph(const CostMatrix& costs, const Restriction& restriction,
                                       const ApSolution& solution, int zeta) {
  if (zeta < 1) throw InvalidRange("zeta must be >= 1");
  const int n = costs.n();
  NeighborDigraph g;
  g.n = n;
  g.zeta = zeta;
  g.matching = solution.assignment;
  g.forward.assign(n, {});

  std::vector<std::vector<char>> present(n, std::vector<char>(n, 0));
  auto add = [&](int x, int y) {
    // N_zeta is taken in K_{A,B:F}; the arc itself must also avoid F1.
    if (restriction.status({x, y}) == Restriction::Status::kFree) present[x][y] = 1;
  };
  for (int x = 0; x < n; ++x) {
    std::vector<std::pair<double, int>> row;
    for (int y = 0; y < n; ++y) {
      if (restriction.usable({x, y})) row.emplace_back(costs(x, y), y);
    }
    for (int y : cheapest(std::move(row), zeta)) add(x, y);
  }
  for (int y = 0; y < n; ++y) {
    std::vector<std::pair<double, int>> col;
    for (int x = 0; x < n; ++x) {
      if (restriction.usable({x, y})) col.emplace_back(costs(x, y), x);
    }
    for (int x : cheapest(std::move(col), zeta)) add(x, y);
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (present[x][y]) g.forward[x].push_back(y);
    }
  }
  return g;
}

double ab_diameter(const NeighborDigraph& g, const CostMatrix& costs,
                   const DiameterOptions& options) {
  const auto adj = arcs_of(g, costs, options);
  double diameter = 0.0;
  for (int a = 0; a < g.n; ++a) {
    const auto dist = distances(adj, a, options.mode);
    for (int b = 0; b < g.n; ++b) {
      if (b != a) diameter = std::max(diameter, dist[g.n + b]);
    }
  }
  return diameter;
}

std::vector<int> shortest_path(const NeighborDigraph& g, const CostMatrix& costs, int source,
                               int target, const DiameterOptions& options) {
  const auto adj = arcs_of(g, costs, options);
  std::vector<int> pred;
  const auto dist = distances(adj, source, options.mode, &pred);
  if (dist[target] == kInf) return {};
  std::vector<int> path{target};
  while (path.back() != source) path.push_back(pred[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

bool weighted_within_hop_bound(const NeighborDigraph& g, const CostMatrix& costs) {
  const auto adj = arcs_of(g, costs, {DiameterMode::kUnweighted, false});
  const int n = g.n;
  for (int a = 0; a < n; ++a) {
    std::vector<int> pred;
    const auto hops = distances(adj, a, DiameterMode::kUnweighted, &pred);
    const auto weighted = distances(adj, a, DiameterMode::kWeighted);
    for (int b = 0; b < n; ++b) {
      const int target = n + b;
      if (b == a || hops[target] == kInf) continue;
      double max_forward = 0.0;
      for (int v = target; v != a; v = pred[v]) {
        if (v >= n) max_forward = std::max(max_forward, costs(pred[v], v - n));
      }
      if (weighted[target] > hops[target] * max_forward + kTightTolerance) return false;
    }
  }
  return true;
}

double max_dual_magnitude(const ApSolution& solution) {
  double best = 0.0;
  for (int i = 0; i < solution.n(); ++i) {
    if (solution.row_free(i)) best = std::max(best, std::abs(solution.u(i)));
    if (solution.col_free(i)) best = std::max(best, std::abs(solution.v(i)));
  }
  return best;
}

double max_matching_edge_cost(const ApSolution& solution, const CostMatrix& costs) {
  double best = 0.0;
  for (int i = 0; i < solution.n(); ++i) {
    if (solution.row_free(i)) best = std::max(best, costs(i, solution.assignment[i]));
  }
  return best;
}

ContractedDegrees contract_and_degrees(const BasisTree& tree, const ApSolution& solution) {
  const int n = solution.n();
  const auto inv = solution.inverse();
  std::vector<char> has_matching(n, 0);
  ContractedDegrees out;
  out.out_degree.assign(n, 0);
  std::vector<int> degree(n, 0);
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (const Edge& e : tree.edges) {
    if (!solution.row_free(e.tail) || !solution.col_free(e.head)) {
      throw InvalidInput("basis tree uses a contracted row or column");
    }
    if (solution.assignment[e.tail] == e.head) {
      has_matching[e.tail] = 1;
      continue;
    }
    const int from = e.tail;
    const int to = inv[e.head];
    const int a = find(from);
    const int b = find(to);
    if (a == b) throw InvalidInput("basis tree contains a cycle");
    parent[a] = b;
    ++out.out_degree[from];
    ++degree[from];
    ++degree[to];
    ++out.edge_count;
  }
  for (int i = 0; i < n; ++i) {
    if (!solution.row_free(i)) continue;
    ++out.vertex_count;
    if (!has_matching[i]) throw InvalidInput("basis tree misses a matching edge");
    if (degree[i] == 1) ++out.leaf_count;
  }
  if (out.edge_count != out.vertex_count - 1) {
    throw InvalidInput("basis tree is not spanning");
  }
  return out;
}

}  // namespace atsp
