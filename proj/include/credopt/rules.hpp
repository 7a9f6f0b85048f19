#pragma once

#include <optional>
#include <vector>

#include "credopt/model.hpp"
#include "credopt/solve_structured.hpp"

namespace credopt {

struct RuleCategory {
  int format_id = 0;
  double lo = 0.0;  // native range [lo, hi)
  double hi = 0.0;
};

struct Rule {
  int id = 0;
  double cost = 0.0;           // stored estimate, authoritative for ordering
  std::vector<int> required;   // per category, aligned with RuleTable order
};

// Categories in global scan order: formats ascending, ranges ascending. The
// constructor demands the whole bound sequence be non-decreasing across the
// table; the left-to-right signed-sum test is only sound under that nesting
// (any earlier surplus reporter then fits the range of any later deficit).
class RuleTable {
 public:
  RuleTable(std::vector<RuleCategory> categories, std::vector<Rule> rules);

  const std::vector<RuleCategory>& categories() const { return categories_; }
  const std::vector<Rule>& rules() const { return rules_; }
  int category_count() const { return static_cast<int>(categories_.size()); }

  // global category index for a report, or -1 when the distance falls past
  // the format's last range
  int category_of(int format_id, double dist) const;

 private:
  std::vector<RuleCategory> categories_;
  std::vector<Rule> rules_;
};

// Reporter indices native to each category, closest first.
struct ReportPool {
  std::vector<std::vector<int>> members;
  std::vector<int> counts() const;
};

ReportPool pool_from_profile(const RuleTable& table, const PreferredProfile& profile,
                             const std::vector<double>& distances);

struct RuleFill {
  bool direct = false;              // every requirement met without upgrades
  std::vector<int> delta;           // surplus(+)/deficit(-) per category
  std::vector<std::vector<int>> drawn;  // reporters consumed per category grid
};

// Greedy fill: grids tight-to-loose per format, each drawing from that
// format's native categories tightest-first, closest reporters first.
// Leftover reports surface as surplus at their native category.
RuleFill fill_rule(const RuleTable& table, const Rule& rule, const ReportPool& pool);

struct FillResult {
  std::vector<RuleFill> per_rule;
};

FillResult fill(const RuleTable& table, const ReportPool& pool);

// True iff the left-to-right running sum of delta never goes negative,
// meaning earlier-format surplus can be upgraded over every deficit.
bool adjustable(const RuleFill& f);
bool adjustable(const RuleTable& table, const Rule& rule, const ReportPool& pool);

struct UpgradeStep {
  int reporter = -1;
  int from_format = 0;
  int to_format = 0;
};

struct Verdict {
  bool credible = false;
  int rule_id = -1;
  double cost = 0.0;
  std::vector<UpgradeStep> plan;  // empty when a rule is met directly
  std::vector<int> activated;     // reporter indices, ascending
};

// First directly satisfied rule, else the cheapest adjustable rule with a
// concrete upgrade plan (closest surplus reporters promoted first), else an
// incredible verdict. Only the reporters the rule needs are activated.
Verdict satisfy(const RuleTable& table, const ReportPool& pool,
                const std::vector<double>& distances);

// Promote the lowest-format reporters one format up until the profile's
// total credibility reaches the target; nullopt when everyone is already at
// the top format and the target is still out of reach. Requires promotion to
// never lower a reporter's credibility (checked against the matrix).
std::optional<PreferredProfile> upgrade_to_feasible(const PreferredProfile& profile,
                                                    const CredibilityMatrix& m,
                                                    const FormatSet& formats, double target);

}  // namespace credopt
