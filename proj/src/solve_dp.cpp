#include "credopt/solve_dp.hpp"

#include <algorithm>
#include <cmath>

#include "credopt/errors.hpp"

namespace credopt {

Assignment finalize_assignment(const CredibilityMatrix& m, const FormatSet& formats,
                               std::vector<int> choices) {
  Assignment a;
  a.choices = std::move(choices);
  for (size_t i = 0; i < a.choices.size(); ++i) {
    const int j = a.choices[i];
    if (j == 0) continue;
    a.total_cost += formats.at(j).cost;
    a.total_credibility += m.values[i][static_cast<size_t>(j) - 1];
  }
  return a;
}

int active_count(const std::vector<int>& choices) {
  int n = 0;
  for (int c : choices) n += c != 0;
  return n;
}

bool meets_target(double credibility, double target) {
  return credibility >= target * (1.0 - 1e-12) - 1e-12;
}

bool within_budget(double cost, double budget) {
  return cost <= budget * (1.0 + 1e-12) + 1e-12;
}

double default_grid_unit(const CredibilityMatrix& m) {
  double mx = 0.0;
  for (const auto& row : m.values)
    for (double v : row) mx = std::max(mx, v);
  return mx > 0 ? 1e-3 * mx : 1e-3;
}

std::optional<Assignment> solve_minc_dp(const MinCProblem& p) {
  if (!(p.zeta > 0)) throw InvalidDiscretization("zeta must be > 0");
  if (p.target < 0) throw InvariantViolation("target must be >= 0");
  const int n = p.matrix.reporter_count();
  const int r = p.matrix.format_count();

  // Complement form: y = 1 - x turns the credibility floor into a knapsack
  // capacity. Picking format k for a reporter contributes the row's other
  // costs as value and the row's other credibility units as weight.
  std::int64_t total_units = 0;
  std::vector<std::vector<std::int64_t>> u(n, std::vector<std::int64_t>(r));
  std::vector<std::int64_t> row_units(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) {
      u[i][j] = units_floor(p.matrix.values[i][j], p.zeta);
      row_units[i] += u[i][j];
    }
    total_units += row_units[i];
  }
  const std::int64_t need = units_ceil(p.target, p.zeta);
  const std::int64_t capacity = total_units - need;
  if (capacity < 0) return std::nullopt;

  double row_cost = 0.0;
  for (int j = 1; j <= r; ++j) row_cost += p.formats.at(j).cost;

  std::vector<McItem> items(n);
  for (int i = 0; i < n; ++i) {
    auto& opts = items[i].options;
    opts.resize(r + 1);
    opts[0] = {row_cost, row_units[i]};  // idle
    for (int j = 0; j < r; ++j)
      opts[j + 1] = {row_cost - p.formats.at(j + 1).cost, row_units[i] - u[i][j]};
  }

  auto sol = solve_multiple_choice(items, capacity);
  if (!sol) return std::nullopt;
  return finalize_assignment(p.matrix, p.formats, std::move(sol->option));
}

Assignment solve_maxc_dp(const MaxCProblem& p) {
  if (!(p.eta > 0)) throw InvalidDiscretization("eta must be > 0");
  if (p.budget < 0) throw InvariantViolation("budget must be >= 0");
  const int n = p.matrix.reporter_count();
  const int r = p.matrix.format_count();

  std::vector<std::int64_t> cost_units(r);
  for (int j = 0; j < r; ++j) cost_units[j] = units_ceil(p.formats.at(j + 1).cost, p.eta);
  const std::int64_t capacity = units_floor(p.budget, p.eta);

  std::vector<McItem> items(n);
  for (int i = 0; i < n; ++i) {
    auto& opts = items[i].options;
    opts.resize(r + 1);
    opts[0] = {0.0, 0};
    for (int j = 0; j < r; ++j) opts[j + 1] = {p.matrix.values[i][j], cost_units[j]};
  }

  auto sol = solve_multiple_choice(items, std::max<std::int64_t>(capacity, 0));
  // idle is always available, so a solution exists
  return finalize_assignment(p.matrix, p.formats, std::move(sol->option));
}

namespace {

struct BruteState {
  const CredibilityMatrix& m;
  const FormatSet& formats;
  std::vector<int> choices;
  std::vector<int> best_choices;
  bool found = false;
  double best_cost = 0, best_cred = 0;
};

// Sums are passed by value so each leaf sees the same left-associated
// reporter-order sum finalize_assignment computes; no backtracking residue.
// Tie-break: objective, then fewer active reporters; lexicographic order falls
// out of the enumeration order.
template <typename Better>
void brute_recurse(BruteState& st, size_t i, double cost, double cred, const Better& better) {
  if (i == st.choices.size()) {
    if (!better(st, cost, cred)) return;
    st.found = true;
    st.best_cost = cost;
    st.best_cred = cred;
    st.best_choices = st.choices;
    return;
  }
  const int r = st.m.format_count();
  for (int j = 0; j <= r; ++j) {
    st.choices[i] = j;
    const double dc = j == 0 ? 0.0 : st.formats.at(j).cost;
    const double dv = j == 0 ? 0.0 : st.m.values[i][static_cast<size_t>(j) - 1];
    brute_recurse(st, i + 1, j == 0 ? cost : cost + dc, j == 0 ? cred : cred + dv, better);
  }
  st.choices[i] = 0;
}

void guard_brute(int n, int r) {
  double combos = std::pow(static_cast<double>(r + 1), n);
  if (combos > 1e7) throw TooLarge("brute force would enumerate more than 1e7 assignments");
}

}  // namespace

std::optional<Assignment> brute_force_minc(const CredibilityMatrix& m, const FormatSet& formats,
                                           double target) {
  guard_brute(m.reporter_count(), m.format_count());
  BruteState st{m, formats, std::vector<int>(m.reporter_count(), 0), {}, false, 0, 0};
  auto better = [&](const BruteState& s, double cost, double cred) {
    if (!meets_target(cred, target)) return false;
    if (!s.found) return true;
    if (cost != s.best_cost) return cost < s.best_cost;
    return active_count(s.choices) < active_count(s.best_choices);
  };
  brute_recurse(st, 0, 0.0, 0.0, better);
  if (!st.found) return std::nullopt;
  return finalize_assignment(m, formats, std::move(st.best_choices));
}

Assignment brute_force_maxc(const CredibilityMatrix& m, const FormatSet& formats, double budget) {
  if (budget < 0) throw InvariantViolation("budget must be >= 0");
  guard_brute(m.reporter_count(), m.format_count());
  BruteState st{m, formats, std::vector<int>(m.reporter_count(), 0), {}, false, 0, 0};
  auto better = [&](const BruteState& s, double cost, double cred) {
    if (!within_budget(cost, budget)) return false;
    if (!s.found) return true;
    if (cred != s.best_cred) return cred > s.best_cred;
    return active_count(s.choices) < active_count(s.best_choices);
  };
  brute_recurse(st, 0, 0.0, 0.0, better);
  // all-idle fits any non-negative budget
  return finalize_assignment(m, formats, std::move(st.best_choices));
}

}  // namespace credopt
