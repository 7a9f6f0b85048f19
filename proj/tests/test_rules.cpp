#include <optional>
#include <vector>

#include <doctest.h>

#include "credopt/errors.hpp"
#include "credopt/rules.hpp"

using namespace credopt;

namespace {

// Three formats (text / photo / video analog), two ranges each, bounds
// non-decreasing across the whole table.
std::vector<RuleCategory> six_categories() {
  return {{1, 0.0, 30.0},  {1, 30.0, 70.0},  {2, 0.0, 90.0},
          {2, 90.0, 120.0}, {3, 0.0, 140.0}, {3, 140.0, 170.0}};
}

// Rules in ascending cost order; costs follow format prices 1 / 4 / 6 except
// the last one, which deliberately stores a stale estimate.
std::vector<Rule> five_rules() {
  return {{0, 12.0, {0, 0, 0, 0, 1, 1}},
          {0, 15.0, {15, 0, 0, 0, 0, 0}},
          {0, 18.0, {0, 0, 0, 3, 1, 0}},
          {0, 20.0, {10, 10, 0, 0, 0, 0}},
          {0, 25.0, {5, 6, 1, 0, 1, 0}}};
}

RuleTable worked_table() { return RuleTable(six_categories(), five_rules()); }

// 10 close texts, one mid-range photo, one far video, three reports past the
// last video range (those never enter the pool).
struct WorkedPool {
  PreferredProfile profile;
  std::vector<double> distances;
};

WorkedPool worked_reporters() {
  WorkedPool w;
  for (int i = 0; i < 10; ++i) {
    w.profile.format_id.push_back(1);
    w.distances.push_back(2.0 * (i + 1));
  }
  w.profile.format_id.push_back(2);
  w.distances.push_back(75.0);
  w.profile.format_id.push_back(3);
  w.distances.push_back(130.0);
  for (double d : {171.0, 200.0, 250.0}) {
    w.profile.format_id.push_back(3);
    w.distances.push_back(d);
  }
  w.profile.cred.assign(w.profile.format_id.size(), 0.1);
  w.profile.cost.assign(w.profile.format_id.size(), 1.0);
  return w;
}

}  // namespace

TEST_CASE("rule table constructor rejects malformed input") {
  CHECK_THROWS_AS(RuleTable({}, {}), InvariantViolation);
  CHECK_THROWS_AS(RuleTable({{1, 5.0, 30.0}}, {}), InvariantViolation);   // first range not at 0
  CHECK_THROWS_AS(RuleTable({{1, 10.0, 10.0}}, {}), InvariantViolation);  // empty range
  CHECK_THROWS_AS(RuleTable({{1, 0.0, 30.0}, {1, 40.0, 70.0}}, {}),
                  InvariantViolation);  // gap between ranges
  CHECK_THROWS_AS(RuleTable({{2, 0.0, 90.0}, {1, 0.0, 30.0}}, {}),
                  InvariantViolation);  // format order
  CHECK_THROWS_AS(RuleTable({{1, 0.0, 100.0}, {2, 0.0, 50.0}}, {}),
                  InvariantViolation);  // global bounds decrease
  CHECK_THROWS_AS(RuleTable({{1, 0.0, 30.0}}, {{0, 5.0, {1, 1}}}),
                  InvariantViolation);  // requirement width
  CHECK_THROWS_AS(RuleTable({{1, 0.0, 30.0}}, {{0, 5.0, {-1}}}), InvariantViolation);
  CHECK_THROWS_AS(RuleTable({{1, 0.0, 30.0}}, {{0, 5.0, {1}}, {0, 4.0, {1}}}),
                  InvariantViolation);  // cost order

  auto table = worked_table();
  CHECK(table.category_count() == 6);
  for (size_t k = 0; k < table.rules().size(); ++k)
    CHECK(table.rules()[k].id == static_cast<int>(k) + 1);  // ids assigned, input ignored
}

TEST_CASE("category lookup uses half-open native ranges") {
  auto table = worked_table();
  CHECK(table.category_of(1, 0.0) == 0);
  CHECK(table.category_of(1, 29.999) == 0);
  CHECK(table.category_of(1, 30.0) == 1);
  CHECK(table.category_of(1, 70.0) == -1);
  CHECK(table.category_of(2, 0.0) == 2);
  CHECK(table.category_of(2, 119.0) == 3);
  CHECK(table.category_of(3, 139.999) == 4);
  CHECK(table.category_of(3, 170.0) == -1);
  CHECK(table.category_of(9, 10.0) == -1);  // unknown format
}

TEST_CASE("pool building drops out-of-range reports and sorts by distance") {
  auto table = worked_table();
  auto w = worked_reporters();
  auto pool = pool_from_profile(table, w.profile, w.distances);
  CHECK(pool.counts() == std::vector<int>{10, 0, 1, 0, 1, 0});
  CHECK(pool.members[0] == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(pool.members[2] == std::vector<int>{10});
  CHECK(pool.members[4] == std::vector<int>{11});

  PreferredProfile short_profile;
  short_profile.format_id = {1};
  CHECK_THROWS_AS(pool_from_profile(table, short_profile, {1.0, 2.0}), CategoryMismatch);

  // equal distances fall back to reporter index
  PreferredProfile tied;
  tied.format_id = {1, 1, 1};
  auto tied_pool = pool_from_profile(table, tied, {5.0, 5.0, 1.0});
  CHECK(tied_pool.members[0] == std::vector<int>{2, 0, 1});
}

TEST_CASE("per-rule fill reports the documented surpluses and deficits") {
  auto table = worked_table();
  auto w = worked_reporters();
  auto pool = pool_from_profile(table, w.profile, w.distances);
  auto filled = fill(table, pool);
  REQUIRE(filled.per_rule.size() == 5);

  CHECK(filled.per_rule[0].delta == std::vector<int>{10, 0, 1, 0, 0, -1});
  CHECK(filled.per_rule[1].delta == std::vector<int>{-5, 0, 1, 0, 1, 0});
  CHECK(filled.per_rule[2].delta == std::vector<int>{10, 0, 0, -2, 0, 0});
  CHECK(filled.per_rule[3].delta == std::vector<int>{0, -10, 1, 0, 1, 0});
  CHECK(filled.per_rule[4].delta == std::vector<int>{0, -1, 0, 0, 0, 0});
  for (const auto& f : filled.per_rule) CHECK_FALSE(f.direct);

  // a deficit in a looser range is coverable by earlier surplus, one in a
  // tighter range is not
  CHECK(adjustable(filled.per_rule[0]));
  CHECK_FALSE(adjustable(filled.per_rule[1]));
  CHECK(adjustable(filled.per_rule[2]));
  CHECK_FALSE(adjustable(filled.per_rule[3]));
  CHECK_FALSE(adjustable(filled.per_rule[4]));

  // the video requirement drains the tight video range before the loose one
  CHECK(filled.per_rule[0].drawn[4] == std::vector<int>{11});
  CHECK(filled.per_rule[0].drawn[5].empty());

  ReportPool misaligned;
  misaligned.members.resize(2);
  CHECK_THROWS_AS(fill_rule(table, table.rules()[0], misaligned), CategoryMismatch);
}

TEST_CASE("satisfy picks the cheapest adjustable rule and plans the upgrade") {
  auto table = worked_table();
  auto w = worked_reporters();
  auto pool = pool_from_profile(table, w.profile, w.distances);
  Verdict v = satisfy(table, pool, w.distances);

  CHECK(v.credible);
  CHECK(v.rule_id == 1);
  CHECK(v.cost == 12.0);
  REQUIRE(v.plan.size() == 1);
  CHECK(v.plan[0].reporter == 0);  // closest surplus text
  CHECK(v.plan[0].from_format == 1);
  CHECK(v.plan[0].to_format == 3);
  CHECK(v.activated == std::vector<int>{0, 11});
}

TEST_CASE("satisfy prefers a directly met rule over any upgrade plan") {
  auto table = worked_table();
  auto w = worked_reporters();
  w.profile.format_id.push_back(3);
  w.profile.cred.push_back(0.1);
  w.profile.cost.push_back(1.0);
  w.distances.push_back(150.0);  // lands in the far video range
  auto pool = pool_from_profile(table, w.profile, w.distances);
  Verdict v = satisfy(table, pool, w.distances);

  CHECK(v.credible);
  CHECK(v.rule_id == 1);
  CHECK(v.plan.empty());
  CHECK(v.activated == std::vector<int>{11, 15});
}

TEST_CASE("satisfy returns an incredible verdict when no rule is reachable") {
  auto table = worked_table();
  PreferredProfile lone;
  lone.format_id = {2};
  std::vector<double> dist = {100.0};
  auto pool = pool_from_profile(table, lone, dist);
  Verdict v = satisfy(table, pool, dist);
  CHECK_FALSE(v.credible);
  CHECK(v.rule_id == -1);
  CHECK(v.activated.empty());
}

TEST_CASE("upgrade loop promotes the lowest format until the target is met") {
  FormatSet fs({{1, 1.0, 3.0, 1.0}, {2, 1.0, 2.0, 2.0}, {3, 1.0, 1.0, 3.0}});
  CredibilityMatrix m;
  m.values = {{0.25, 0.5, 1.0}, {0.125, 0.5, 0.75}};
  m.distances = {1.0, 2.0};
  PreferredProfile base;
  base.format_id = {1, 1};
  base.cred = {0.25, 0.125};
  base.cost = {1.0, 1.0};

  auto same = upgrade_to_feasible(base, m, fs, 0.375);
  REQUIRE(same.has_value());
  CHECK(same->format_id == std::vector<int>{1, 1});

  auto one_round = upgrade_to_feasible(base, m, fs, 1.0);
  REQUIRE(one_round.has_value());
  CHECK(one_round->format_id == std::vector<int>{2, 2});
  CHECK(one_round->cred == std::vector<double>{0.5, 0.5});
  CHECK(one_round->cost == std::vector<double>{2.0, 2.0});

  auto two_rounds = upgrade_to_feasible(base, m, fs, 1.75);
  REQUIRE(two_rounds.has_value());
  CHECK(two_rounds->format_id == std::vector<int>{3, 3});

  CHECK_FALSE(upgrade_to_feasible(base, m, fs, 1.8).has_value());

  PreferredProfile mixed = base;
  mixed.format_id = {1, 3};
  mixed.cred = {0.25, 0.75};
  mixed.cost = {1.0, 3.0};
  auto partial = upgrade_to_feasible(mixed, m, fs, 1.2);
  REQUIRE(partial.has_value());
  CHECK(partial->format_id == std::vector<int>{2, 3});

  CredibilityMatrix dropping;
  dropping.values = {{0.5, 0.4, 0.6}};
  dropping.distances = {1.0};
  PreferredProfile p1;
  p1.format_id = {1};
  p1.cred = {0.5};
  p1.cost = {1.0};
  CHECK_THROWS_AS(upgrade_to_feasible(p1, dropping, fs, 0.6), InvariantViolation);
}
