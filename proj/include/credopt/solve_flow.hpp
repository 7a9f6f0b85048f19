#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "credopt/model.hpp"
#include "credopt/solve_dp.hpp"

namespace credopt {

struct ReportVector {
  std::vector<std::int64_t> alpha;  // reporters per format
  std::int64_t total() const;
};

struct FlowEdge {
  int from = 0;
  int to = 0;
  std::int64_t capacity = 0;
  double cost = 0.0;
};

// Bipartite assignment network: source -> each reporter (cap 1), reporter ->
// format (cap 1, cost cmax - c[i][j]), format j -> sink (cap alpha[j]).
// Demanding exactly sum(alpha) units of flow realizes the mandatory
// format-side quotas.
struct FlowNetwork {
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<FlowEdge> edges;
  double cmax = 0.0;
};

FlowNetwork build_network(const CredibilityMatrix& m, const ReportVector& vec);

struct FlowResult {
  std::int64_t flow = 0;
  double cost = 0.0;
  std::vector<std::int64_t> edge_flow;  // parallel to FlowNetwork::edges
};

// Successive shortest paths with potentials (Bellman-Ford once, then
// Dijkstra); pushes `required` units or throws InfeasibleVector.
FlowResult solve_min_cost_flow(const FlowNetwork& net, std::int64_t required);

// Max-credibility assignment using exactly alpha[j] reporters per format.
Assignment solve_vector(const CredibilityMatrix& m, const FormatSet& formats,
                        const ReportVector& vec);

// Enumerate report vectors (sum alpha <= N) within the limit, keep those
// affordable/satisfying, return the best assignment.
Assignment solve_maxc_mcf(const CredibilityMatrix& m, const FormatSet& formats, double budget,
                          std::int64_t vector_limit = 1000000);
std::optional<Assignment> solve_minc_mcf(const CredibilityMatrix& m, const FormatSet& formats,
                                         double target, std::int64_t vector_limit = 1000000);

}  // namespace credopt
