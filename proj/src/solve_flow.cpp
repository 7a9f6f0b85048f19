#include "credopt/solve_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "credopt/errors.hpp"

namespace credopt {

std::int64_t ReportVector::total() const {
  std::int64_t t = 0;
  for (auto a : alpha) t += a;
  return t;
}

FlowNetwork build_network(const CredibilityMatrix& m, const ReportVector& vec) {
  const int n = m.reporter_count();
  const int r = m.format_count();
  if (static_cast<int>(vec.alpha.size()) != r)
    throw InvariantViolation("report vector length must equal the format count");
  for (auto a : vec.alpha)
    if (a < 0) throw InvariantViolation("report vector entries must be >= 0");
  if (vec.total() > n) throw VectorTooLarge("report vector demands more reporters than exist");

  FlowNetwork net;
  net.node_count = n + r + 2;
  net.source = 0;
  net.sink = n + r + 1;
  for (const auto& row : m.values)
    for (double v : row) net.cmax = std::max(net.cmax, v);
  for (int i = 0; i < n; ++i) net.edges.push_back({net.source, 1 + i, 1, 0.0});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j)
      net.edges.push_back({1 + i, 1 + n + j, 1, net.cmax - m.values[i][j]});
  for (int j = 0; j < r; ++j) net.edges.push_back({1 + n + j, net.sink, vec.alpha[j], 0.0});
  return net;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Residual {
  std::vector<int> to;
  std::vector<std::int64_t> cap;
  std::vector<double> cost;
  std::vector<std::vector<int>> adj;

  explicit Residual(int nodes) : adj(nodes) {}

  void add(int u, int v, std::int64_t c, double w) {
    adj[u].push_back(static_cast<int>(to.size()));
    to.push_back(v);
    cap.push_back(c);
    cost.push_back(w);
    adj[v].push_back(static_cast<int>(to.size()));
    to.push_back(u);
    cap.push_back(0);
    cost.push_back(-w);
  }
};

}  // namespace

FlowResult solve_min_cost_flow(const FlowNetwork& net, std::int64_t required) {
  Residual g(net.node_count);
  for (const FlowEdge& e : net.edges) g.add(e.from, e.to, e.capacity, e.cost);

  // Potentials from one Bellman-Ford pass (handles any negative costs in the
  // input network), then Dijkstra on reduced costs per augmentation.
  std::vector<double> h(net.node_count, kInf);
  h[net.source] = 0;
  for (int pass = 0; pass < net.node_count; ++pass) {
    bool changed = false;
    for (int u = 0; u < net.node_count; ++u) {
      if (h[u] == kInf) continue;
      for (int id : g.adj[u]) {
        if (g.cap[id] <= 0) continue;
        if (h[u] + g.cost[id] < h[g.to[id]]) {
          h[g.to[id]] = h[u] + g.cost[id];
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  for (double& v : h)
    if (v == kInf) v = 0;

  FlowResult res;
  std::vector<double> dist(net.node_count);
  std::vector<int> prev_edge(net.node_count);
  while (res.flow < required) {
    std::fill(dist.begin(), dist.end(), kInf);
    dist[net.source] = 0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.push({0.0, net.source});
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (int id : g.adj[u]) {
        if (g.cap[id] <= 0) continue;
        const int v = g.to[id];
        const double nd = d + g.cost[id] + h[u] - h[v];
        if (nd < dist[v]) {
          dist[v] = nd;
          prev_edge[v] = id;
          pq.push({nd, v});
        }
      }
    }
    if (dist[net.sink] == kInf)
      throw InfeasibleVector("cannot push the demanded flow through the network");
    for (int u = 0; u < net.node_count; ++u)
      if (dist[u] != kInf) h[u] += dist[u];

    std::int64_t push = required - res.flow;
    for (int v = net.sink; v != net.source; v = g.to[prev_edge[v] ^ 1])
      push = std::min(push, g.cap[prev_edge[v]]);
    for (int v = net.sink; v != net.source; v = g.to[prev_edge[v] ^ 1]) {
      g.cap[prev_edge[v]] -= push;
      g.cap[prev_edge[v] ^ 1] += push;
    }
    res.flow += push;
    res.cost += static_cast<double>(push) * h[net.sink];
  }

  res.edge_flow.assign(net.edges.size(), 0);
  for (size_t e = 0; e < net.edges.size(); ++e)
    res.edge_flow[e] = g.cap[2 * e + 1];  // reverse capacity = pushed flow
  return res;
}

Assignment solve_vector(const CredibilityMatrix& m, const FormatSet& formats,
                        const ReportVector& vec) {
  const int n = m.reporter_count();
  const int r = m.format_count();
  FlowNetwork net = build_network(m, vec);
  FlowResult flow = solve_min_cost_flow(net, vec.total());
  std::vector<int> choices(n, 0);
  // assignment edges sit between the N source edges and the R sink edges
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j)
      if (flow.edge_flow[static_cast<size_t>(n) + static_cast<size_t>(i) * r + j] > 0)
        choices[i] = j + 1;
  return finalize_assignment(m, formats, std::move(choices));
}

namespace {

void enumerate_vectors(int r, std::int64_t remaining, std::vector<std::int64_t>& alpha, int j,
                       std::vector<ReportVector>& out, std::int64_t limit) {
  if (j == r) {
    out.push_back({alpha});
    if (static_cast<std::int64_t>(out.size()) > limit)
      throw EnumerationTooLarge("report vector enumeration exceeded the limit");
    return;
  }
  for (std::int64_t a = 0; a <= remaining; ++a) {
    alpha[j] = a;
    enumerate_vectors(r, remaining - a, alpha, j + 1, out, limit);
  }
  alpha[j] = 0;
}

std::vector<ReportVector> all_vectors(int n, int r, std::int64_t limit) {
  std::vector<ReportVector> out;
  std::vector<std::int64_t> alpha(r, 0);
  enumerate_vectors(r, n, alpha, 0, out, limit);
  return out;
}

double vector_cost(const ReportVector& v, const FormatSet& formats) {
  double c = 0;
  for (size_t j = 0; j < v.alpha.size(); ++j)
    c += static_cast<double>(v.alpha[j]) * formats.at(static_cast<int>(j) + 1).cost;
  return c;
}

}  // namespace

Assignment solve_maxc_mcf(const CredibilityMatrix& m, const FormatSet& formats, double budget,
                          std::int64_t vector_limit) {
  if (budget < 0) throw InvariantViolation("budget must be >= 0");
  auto vectors = all_vectors(m.reporter_count(), m.format_count(), vector_limit);
  std::sort(vectors.begin(), vectors.end(), [](const ReportVector& a, const ReportVector& b) {
    if (a.total() != b.total()) return a.total() < b.total();
    return a.alpha < b.alpha;
  });
  std::optional<Assignment> best;
  for (const ReportVector& v : vectors) {
    if (!within_budget(vector_cost(v, formats), budget)) continue;
    Assignment a = solve_vector(m, formats, v);
    if (!best || a.total_credibility > best->total_credibility) best = std::move(a);
  }
  return *best;  // the zero vector always qualifies
}

std::optional<Assignment> solve_minc_mcf(const CredibilityMatrix& m, const FormatSet& formats,
                                         double target, std::int64_t vector_limit) {
  auto vectors = all_vectors(m.reporter_count(), m.format_count(), vector_limit);
  std::vector<std::pair<double, const ReportVector*>> order;
  order.reserve(vectors.size());
  for (const ReportVector& v : vectors) order.push_back({vector_cost(v, formats), &v});
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->alpha < b.second->alpha;
  });
  for (const auto& [cost, v] : order) {
    Assignment a = solve_vector(m, formats, *v);
    if (meets_target(a.total_credibility, target)) return a;
  }
  return std::nullopt;
}

}  // namespace credopt
