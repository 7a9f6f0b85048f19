#pragma once

#include <optional>
#include <vector>

#include "credopt/model.hpp"
#include "credopt/solve_dp.hpp"

namespace credopt {

// Two-format input normalized so the cheap format costs 1: rows sorted by
// (distance, original reporter index) ascending, c1 >= c2 per row, beta > 1.
struct TwoFormatInstance {
  std::vector<double> c1, c2;  // credibility in the rich/cheap format per row
  std::vector<double> dist;
  std::vector<int> original;  // original reporter index per row
  double beta = 0.0;          // rich-format cost after normalization
  double budget = 0.0;        // budget after normalization
  double cost_scale = 1.0;    // original cheap-format cost
};

// Validates the structural preconditions (two formats, c1 >= c2, beta > 1).
TwoFormatInstance make_two_format_instance(const CredibilityMatrix& m, const FormatSet& formats,
                                           double budget);

// Optimal two-format selection: scan the rich-report count i, activate the
// i + floor(B - beta*i) closest reporters, hand the rich format to the i
// largest credibility gains. Choices come back in original reporter order.
Assignment solve_maxc_two_format(const TwoFormatInstance& inst, const CredibilityMatrix& m,
                                 const FormatSet& formats);
Assignment solve_maxc_two_format(const CredibilityMatrix& m, const FormatSet& formats,
                                 double budget);

// Per-reporter credibility-per-unit-cost argmax (ties to the lowest format).
struct PreferredProfile {
  std::vector<int> format_id;
  std::vector<double> cred;
  std::vector<double> cost;
};

PreferredProfile preselect_formats(const CredibilityMatrix& m, const FormatSet& formats);

// Binary-knapsack reductions over the preferred profile. A non-additive
// corroboration function switches to the index/value-substituted recursions;
// that variant is a documented heuristic, exact only for the identity.
std::optional<Assignment> solve_minc_ann(const PreferredProfile& profile, double target,
                                         double zeta,
                                         const CorroborationFn* corroboration = nullptr);
Assignment solve_maxc_ann(const PreferredProfile& profile, double budget, double eta,
                          const CorroborationFn* corroboration = nullptr);

}  // namespace credopt
