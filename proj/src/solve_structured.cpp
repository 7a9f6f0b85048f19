#include "credopt/solve_structured.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "credopt/errors.hpp"
#include "credopt/knapsack.hpp"

namespace credopt {

TwoFormatInstance make_two_format_instance(const CredibilityMatrix& m, const FormatSet& formats,
                                           double budget) {
  if (m.format_count() != 2 || formats.size() != 2)
    throw InvariantViolation("two-format solver requires exactly two formats");
  const double e1 = formats.at(1).cost;
  const double e2 = formats.at(2).cost;
  if (!(e1 > e2)) throw InvariantViolation("two-format solver requires format 1 to cost more");
  if (budget < 0) throw InvariantViolation("budget must be >= 0");

  const int n = m.reporter_count();
  TwoFormatInstance inst;
  inst.beta = e1 / e2;
  inst.budget = budget / e2;
  inst.cost_scale = e2;
  inst.original.resize(n);
  std::iota(inst.original.begin(), inst.original.end(), 0);
  std::sort(inst.original.begin(), inst.original.end(), [&](int a, int b) {
    if (m.distances[a] != m.distances[b]) return m.distances[a] < m.distances[b];
    return a < b;
  });
  inst.c1.resize(n);
  inst.c2.resize(n);
  inst.dist.resize(n);
  for (int row = 0; row < n; ++row) {
    const int i = inst.original[row];
    inst.c1[row] = m.values[i][0];
    inst.c2[row] = m.values[i][1];
    inst.dist[row] = m.distances[i];
    if (inst.c1[row] < inst.c2[row])
      throw InvariantViolation("two-format solver requires c1 >= c2 for every reporter");
    if (row > 0 && (inst.c1[row] > inst.c1[row - 1] || inst.c2[row] > inst.c2[row - 1]))
      // the closest-prefix argument needs credibility non-increasing in
      // distance; noise patterns that break this are out of scope here
      throw InvariantViolation("two-format solver requires credibility non-increasing in distance");
  }
  return inst;
}

Assignment solve_maxc_two_format(const TwoFormatInstance& inst, const CredibilityMatrix& m,
                                 const FormatSet& formats) {
  const int n = static_cast<int>(inst.c1.size());
  const int i_max = static_cast<int>(std::min<double>(
      n, std::floor(inst.beta > 0 ? inst.budget / inst.beta + 1e-9 : 0)));

  double best_value = -1.0;
  int best_rich = -1, best_active = 0;
  std::vector<int> best_rich_rows;

  std::vector<int> by_gain(n);
  for (int i = 0; i <= i_max; ++i) {
    const int y = static_cast<int>(
        std::max(0.0, std::min<double>(n - i, std::floor(inst.budget - inst.beta * i + 1e-9))));
    const int active = i + y;
    if (active == 0 && i > 0) continue;
    by_gain.resize(active);
    std::iota(by_gain.begin(), by_gain.end(), 0);
    std::sort(by_gain.begin(), by_gain.end(), [&](int a, int b) {
      const double ga = inst.c1[a] - inst.c2[a];
      const double gb = inst.c1[b] - inst.c2[b];
      if (ga != gb) return ga > gb;
      return a < b;
    });
    double value = 0;
    for (int row = 0; row < active; ++row) value += inst.c2[row];
    for (int t = 0; t < i; ++t) value += inst.c1[by_gain[t]] - inst.c2[by_gain[t]];
    if (value > best_value) {
      best_value = value;
      best_rich = i;
      best_active = active;
      best_rich_rows.assign(by_gain.begin(), by_gain.begin() + i);
    }
  }

  std::vector<int> choices(m.reporter_count(), 0);
  for (int row = 0; row < best_active; ++row) choices[inst.original[row]] = 2;
  for (int t = 0; t < best_rich; ++t) choices[inst.original[best_rich_rows[t]]] = 1;
  return finalize_assignment(m, formats, std::move(choices));
}

Assignment solve_maxc_two_format(const CredibilityMatrix& m, const FormatSet& formats,
                                 double budget) {
  return solve_maxc_two_format(make_two_format_instance(m, formats, budget), m, formats);
}

PreferredProfile preselect_formats(const CredibilityMatrix& m, const FormatSet& formats) {
  const int n = m.reporter_count();
  const int r = m.format_count();
  PreferredProfile p;
  p.format_id.resize(n);
  p.cred.resize(n);
  p.cost.resize(n);
  for (int i = 0; i < n; ++i) {
    int best = 1;
    double best_ratio = m.values[i][0] / formats.at(1).cost;
    for (int j = 2; j <= r; ++j) {
      const double ratio = m.values[i][j - 1] / formats.at(j).cost;
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = j;
      }
    }
    p.format_id[i] = best;
    p.cred[i] = m.values[i][best - 1];
    p.cost[i] = formats.at(best).cost;
  }
  return p;
}

namespace {

Assignment profile_assignment(const PreferredProfile& profile, const std::vector<bool>& take) {
  Assignment a;
  const size_t n = profile.format_id.size();
  a.choices.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    if (!take[i]) continue;
    a.choices[i] = profile.format_id[i];
    a.total_cost += profile.cost[i];
    a.total_credibility += profile.cred[i];
  }
  return a;
}

// Substituted recursions used when corroboration is a non-additive table; the
// map is applied to the remaining-capacity index (minimum-cost route) or the
// accumulated value (maximum-credibility route), exactly as the reduced
// recursion is extended. Heuristic unless the map is the identity.
std::optional<Assignment> minc_ann_substituted(const PreferredProfile& profile, double target,
                                               double zeta, const CorroborationFn& corr) {
  const int n = static_cast<int>(profile.format_id.size());
  std::vector<std::int64_t> u(n);
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    u[i] = units_floor(profile.cred[i], zeta);
    total += u[i];
  }
  const std::int64_t cap = total - units_ceil(target, zeta);
  if (cap < 0) return std::nullopt;
  const size_t width = static_cast<size_t>(cap) + 1;

  std::vector<double> prev(width, 0.0), cur(width);
  std::vector<std::uint8_t> skip(static_cast<size_t>(n) * width);
  for (int l = 0; l < n; ++l) {
    for (size_t s = 0; s < width; ++s) {
      double best = prev[s];  // reporter active, no saved cost
      std::uint8_t took = 0;
      if (u[l] <= static_cast<std::int64_t>(s)) {
        const double mapped = corr((static_cast<double>(s) - static_cast<double>(u[l])) * zeta);
        std::int64_t idx = units_floor(std::max(mapped, 0.0), zeta);
        idx = std::min<std::int64_t>(idx, static_cast<std::int64_t>(s) - u[l]);
        const double v = profile.cost[l] + prev[static_cast<size_t>(idx)];
        if (v > best) {
          best = v;
          took = 1;
        }
      }
      cur[s] = best;
      skip[static_cast<size_t>(l) * width + s] = took;
    }
    std::swap(prev, cur);
  }

  std::vector<bool> take(n, true);
  std::int64_t s = cap;
  for (int l = n - 1; l >= 0; --l) {
    if (skip[static_cast<size_t>(l) * width + static_cast<size_t>(s)]) {
      take[l] = false;
      const double mapped = corr((static_cast<double>(s) - static_cast<double>(u[l])) * zeta);
      std::int64_t idx = units_floor(std::max(mapped, 0.0), zeta);
      s = std::min<std::int64_t>(idx, s - u[l]);
    }
  }
  return profile_assignment(profile, take);
}

Assignment maxc_ann_substituted(const PreferredProfile& profile, double budget, double eta,
                                const CorroborationFn& corr) {
  const int n = static_cast<int>(profile.format_id.size());
  std::vector<std::int64_t> w(n);
  for (int i = 0; i < n; ++i) w[i] = units_ceil(profile.cost[i], eta);
  const std::int64_t cap = std::max<std::int64_t>(units_floor(budget, eta), 0);
  const size_t width = static_cast<size_t>(cap) + 1;

  std::vector<double> prev(width, 0.0), cur(width);
  std::vector<std::uint8_t> took(static_cast<size_t>(n) * width);
  for (int l = 0; l < n; ++l) {
    for (size_t s = 0; s < width; ++s) {
      double best = prev[s];
      std::uint8_t t = 0;
      if (w[l] <= static_cast<std::int64_t>(s)) {
        const double v = corr(profile.cred[l] + prev[s - static_cast<size_t>(w[l])]);
        if (v > best) {
          best = v;
          t = 1;
        }
      }
      cur[s] = best;
      took[static_cast<size_t>(l) * width + s] = t;
    }
    std::swap(prev, cur);
  }

  std::vector<bool> take(n, false);
  std::int64_t s = cap;
  for (int l = n - 1; l >= 0; --l) {
    if (took[static_cast<size_t>(l) * width + static_cast<size_t>(s)]) {
      take[l] = true;
      s -= w[l];
    }
  }
  return profile_assignment(profile, take);
}

}  // namespace

std::optional<Assignment> solve_minc_ann(const PreferredProfile& profile, double target,
                                         double zeta, const CorroborationFn* corroboration) {
  if (!(zeta > 0)) throw InvalidDiscretization("zeta must be > 0");
  if (target < 0) throw InvariantViolation("target must be >= 0");
  if (corroboration && !corroboration->is_additive())
    return minc_ann_substituted(profile, target, zeta, *corroboration);

  const int n = static_cast<int>(profile.format_id.size());
  double all_cred = 0;
  for (int i = 0; i < n; ++i) all_cred += profile.cred[i];
  if (!meets_target(all_cred, target)) return std::nullopt;

  std::vector<std::int64_t> u(n);
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    u[i] = units_floor(profile.cred[i], zeta);
    total += u[i];
  }
  const std::int64_t cap = total - units_ceil(target, zeta);
  if (cap < 0) return std::nullopt;

  std::vector<McItem> items(n);
  for (int i = 0; i < n; ++i)
    items[i].options = {{profile.cost[i], u[i]},  // skip the reporter
                        {0.0, 0}};                // keep it active
  auto sol = solve_multiple_choice(items, cap);
  if (!sol) return std::nullopt;
  std::vector<bool> take(n);
  for (int i = 0; i < n; ++i) take[i] = sol->option[i] == 1;
  return profile_assignment(profile, take);
}

Assignment solve_maxc_ann(const PreferredProfile& profile, double budget, double eta,
                          const CorroborationFn* corroboration) {
  if (!(eta > 0)) throw InvalidDiscretization("eta must be > 0");
  if (budget < 0) throw InvariantViolation("budget must be >= 0");
  if (corroboration && !corroboration->is_additive())
    return maxc_ann_substituted(profile, budget, eta, *corroboration);

  const int n = static_cast<int>(profile.format_id.size());
  std::vector<McItem> items(n);
  for (int i = 0; i < n; ++i)
    items[i].options = {{0.0, 0}, {profile.cred[i], units_ceil(profile.cost[i], eta)}};
  auto sol = solve_multiple_choice(items, std::max<std::int64_t>(units_floor(budget, eta), 0));
  std::vector<bool> take(n);
  for (int i = 0; i < n; ++i) take[i] = sol->option[i] == 1;
  return profile_assignment(profile, take);
}

}  // namespace credopt
