#include "credopt/rules.hpp"

#include <algorithm>
#include <string>

#include "credopt/errors.hpp"

namespace credopt {

RuleTable::RuleTable(std::vector<RuleCategory> categories, std::vector<Rule> rules)
    : categories_(std::move(categories)), rules_(std::move(rules)) {
  if (categories_.empty()) throw InvariantViolation("rule table: no categories");
  for (size_t i = 0; i < categories_.size(); ++i) {
    const RuleCategory& c = categories_[i];
    if (!(c.lo < c.hi)) throw InvariantViolation("rule table: empty category range");
    if (i > 0) {
      const RuleCategory& p = categories_[i - 1];
      if (c.format_id < p.format_id)
        throw InvariantViolation("rule table: categories must be grouped by ascending format");
      if (c.format_id == p.format_id && c.lo != p.hi)
        throw InvariantViolation("rule table: a format's ranges must be contiguous ascending");
      if (c.format_id != p.format_id && c.lo != 0)
        throw InvariantViolation("rule table: a format's first range must start at 0");
      if (c.hi < p.hi)
        throw InvariantViolation(
            "rule table: range bounds must be non-decreasing left to right "
            "(the upgrade test relies on it)");
    } else if (c.lo != 0) {
      throw InvariantViolation("rule table: a format's first range must start at 0");
    }
  }
  for (size_t k = 0; k < rules_.size(); ++k) {
    Rule& r = rules_[k];
    r.id = static_cast<int>(k) + 1;
    if (r.required.size() != categories_.size())
      throw InvariantViolation("rule table: rule " + std::to_string(r.id) +
                               " requirement count mismatch");
    for (int q : r.required)
      if (q < 0) throw InvariantViolation("rule table: negative requirement");
    if (k > 0 && rules_[k - 1].cost > r.cost)
      throw InvariantViolation("rule table: rules must be sorted by ascending cost");
  }
}

int RuleTable::category_of(int format_id, double dist) const {
  for (size_t g = 0; g < categories_.size(); ++g) {
    const RuleCategory& c = categories_[g];
    if (c.format_id == format_id && dist >= c.lo && dist < c.hi) return static_cast<int>(g);
  }
  return -1;
}

std::vector<int> ReportPool::counts() const {
  std::vector<int> c(members.size());
  for (size_t g = 0; g < members.size(); ++g) c[g] = static_cast<int>(members[g].size());
  return c;
}

ReportPool pool_from_profile(const RuleTable& table, const PreferredProfile& profile,
                             const std::vector<double>& distances) {
  if (profile.format_id.size() != distances.size())
    throw CategoryMismatch("profile and distance vector sizes differ");
  ReportPool pool;
  pool.members.resize(table.categories().size());
  for (size_t i = 0; i < profile.format_id.size(); ++i) {
    const int g = table.category_of(profile.format_id[i], distances[i]);
    if (g >= 0) pool.members[g].push_back(static_cast<int>(i));
  }
  for (auto& m : pool.members)
    std::sort(m.begin(), m.end(), [&](int a, int b) {
      if (distances[a] != distances[b]) return distances[a] < distances[b];
      return a < b;
    });
  return pool;
}

RuleFill fill_rule(const RuleTable& table, const Rule& rule, const ReportPool& pool) {
  const auto& cats = table.categories();
  if (pool.members.size() != cats.size())
    throw CategoryMismatch("pool categories do not align with the rule table");

  RuleFill f;
  f.delta.assign(cats.size(), 0);
  f.drawn.resize(cats.size());
  std::vector<std::vector<int>> avail = pool.members;  // per category, closest first

  f.direct = true;
  for (size_t g = 0; g < cats.size(); ++g) {
    int need = rule.required[g];
    // draw from this format's categories, tightest first, up to grid g
    for (size_t c = 0; c <= g && need > 0; ++c) {
      if (cats[c].format_id != cats[g].format_id) continue;
      while (need > 0 && !avail[c].empty()) {
        f.drawn[g].push_back(avail[c].front());
        avail[c].erase(avail[c].begin());
        --need;
      }
    }
    if (need > 0) {
      f.delta[g] = -need;
      f.direct = false;
    }
  }
  for (size_t c = 0; c < cats.size(); ++c)
    f.delta[c] += static_cast<int>(avail[c].size());  // leftovers surface as surplus
  return f;
}

FillResult fill(const RuleTable& table, const ReportPool& pool) {
  FillResult out;
  out.per_rule.reserve(table.rules().size());
  for (const Rule& r : table.rules()) out.per_rule.push_back(fill_rule(table, r, pool));
  return out;
}

bool adjustable(const RuleFill& f) {
  long long run = 0;
  for (int d : f.delta) {
    run += d;
    if (run < 0) return false;
  }
  return true;
}

bool adjustable(const RuleTable& table, const Rule& rule, const ReportPool& pool) {
  return adjustable(fill_rule(table, rule, pool));
}

namespace {

struct SurplusReporter {
  int reporter;
  double dist;
  int native_category;
};

}  // namespace

Verdict satisfy(const RuleTable& table, const ReportPool& pool,
                const std::vector<double>& distances) {
  const auto& cats = table.categories();
  FillResult filled = fill(table, pool);

  for (size_t k = 0; k < table.rules().size(); ++k) {
    const RuleFill& f = filled.per_rule[k];
    if (!f.direct) continue;
    Verdict v;
    v.credible = true;
    v.rule_id = table.rules()[k].id;
    v.cost = table.rules()[k].cost;
    for (const auto& drawn : f.drawn)
      for (int rep : drawn) v.activated.push_back(rep);
    std::sort(v.activated.begin(), v.activated.end());
    return v;
  }

  for (size_t k = 0; k < table.rules().size(); ++k) {
    const Rule& rule = table.rules()[k];
    const RuleFill& f = filled.per_rule[k];
    if (!adjustable(f)) continue;

    Verdict v;
    v.credible = true;
    v.rule_id = rule.id;
    v.cost = rule.cost;
    for (const auto& drawn : f.drawn)
      for (int rep : drawn) v.activated.push_back(rep);

    // Surplus reporters per category = pool members minus the ones drawn by
    // any grid of that format.
    std::vector<std::vector<int>> leftover(cats.size());
    {
      std::vector<bool> used(distances.size(), false);
      for (const auto& drawn : f.drawn)
        for (int rep : drawn) used[rep] = true;
      for (size_t c = 0; c < cats.size(); ++c)
        for (int rep : pool.members[c])
          if (!used[rep]) leftover[c].push_back(rep);
    }

    std::vector<SurplusReporter> bank;
    for (size_t g = 0; g < cats.size(); ++g) {
      if (f.delta[g] > 0) {
        for (int rep : leftover[g])
          bank.push_back({rep, distances[rep], static_cast<int>(g)});
      } else if (f.delta[g] < 0) {
        for (int need = -f.delta[g]; need > 0; --need) {
          auto pick = std::min_element(bank.begin(), bank.end(),
                                       [](const SurplusReporter& a, const SurplusReporter& b) {
                                         if (a.dist != b.dist) return a.dist < b.dist;
                                         return a.reporter < b.reporter;
                                       });
          // adjustable() guarantees the bank is never empty here
          v.plan.push_back({pick->reporter, cats[static_cast<size_t>(pick->native_category)].format_id,
                            cats[g].format_id});
          v.activated.push_back(pick->reporter);
          bank.erase(pick);
        }
      }
    }
    std::sort(v.activated.begin(), v.activated.end());
    return v;
  }

  return Verdict{};
}

std::optional<PreferredProfile> upgrade_to_feasible(const PreferredProfile& profile,
                                                    const CredibilityMatrix& m,
                                                    const FormatSet& formats, double target) {
  const int n = m.reporter_count();
  const int r = m.format_count();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j + 1 < r; ++j)
      if (m.values[i][j + 1] < m.values[i][j])
        throw InvariantViolation(
            "format promotion would lower credibility for reporter " + std::to_string(i) +
            "; the upgrade loop assumes richer formats never hurt");

  PreferredProfile p = profile;
  auto total = [&] {
    double t = 0;
    for (double c : p.cred) t += c;
    return t;
  };
  while (!meets_target(total(), target)) {
    int lowest = r + 1;
    for (int f : p.format_id) lowest = std::min(lowest, f);
    if (lowest >= r) return std::nullopt;  // everyone at the top and still short
    for (int i = 0; i < n; ++i) {
      if (p.format_id[i] != lowest) continue;
      p.format_id[i] = lowest + 1;
      p.cred[i] = m.values[i][static_cast<size_t>(lowest)];
      p.cost[i] = formats.at(lowest + 1).cost;
    }
  }
  return p;
}

}  // namespace credopt
