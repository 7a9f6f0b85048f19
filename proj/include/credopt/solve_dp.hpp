#pragma once

#include <optional>
#include <vector>

#include "credopt/knapsack.hpp"
#include "credopt/model.hpp"

namespace credopt {

struct Assignment {
  std::vector<int> choices;        // per reporter: 0 = idle, else format id
  double total_cost = 0.0;
  double total_credibility = 0.0;  // additive sum over chosen cells
};

// Recompute totals from the choice vector in ascending reporter order, the one
// summation order shared by every solver so equal selections compare exactly.
Assignment finalize_assignment(const CredibilityMatrix& m, const FormatSet& formats,
                               std::vector<int> choices);

int active_count(const std::vector<int>& choices);

// Shared feasibility predicates with 1e-12 relative slack, so float-summed
// oracles and integer-unit DP agree on grid-aligned instances.
bool meets_target(double credibility, double target);
bool within_budget(double cost, double budget);

struct MinCProblem {
  CredibilityMatrix matrix;
  FormatSet formats;
  double target = 0.0;  // required total credibility, >= 0
  double zeta = 0.0;    // credibility grid unit, > 0
};

struct MaxCProblem {
  CredibilityMatrix matrix;
  FormatSet formats;
  double budget = 0.0;  // cost budget, >= 0
  double eta = 0.0;     // cost grid unit, > 0
};

// 1e-3 x the largest matrix cell (the evaluation's grid-resolution convention).
double default_grid_unit(const CredibilityMatrix& m);

// Minimum-cost assignment with credibility >= target, optimal w.r.t.
// credibilities truncated down to the zeta grid (so true credibility of the
// result never undershoots the target). nullopt = infeasible.
std::optional<Assignment> solve_minc_dp(const MinCProblem& p);

// Maximum-credibility assignment with cost <= budget, optimal w.r.t. costs
// rounded up to the eta grid (so the true cost never overshoots the budget).
Assignment solve_maxc_dp(const MaxCProblem& p);

// Exhaustive (R+1)^N enumeration; ties prefer fewer active reporters, then the
// lexicographically smallest choice vector. Guarded at 1e7 assignments.
std::optional<Assignment> brute_force_minc(const CredibilityMatrix& m, const FormatSet& formats,
                                           double target);
Assignment brute_force_maxc(const CredibilityMatrix& m, const FormatSet& formats, double budget);

}  // namespace credopt
