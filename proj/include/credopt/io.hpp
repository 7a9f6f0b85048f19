#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "credopt/model.hpp"
#include "credopt/renewals.hpp"
#include "credopt/rules.hpp"

namespace credopt {

// Throws ParseError on malformed documents, InvariantViolation when a parsed
// scenario breaks a model invariant (messages name the offending key).
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

struct RuleTableFile {
  std::vector<double> format_costs;
  RuleTable table;
  // one entry per rule whose stored cost disagrees with the cost recomputed
  // from format_costs; the stored value stays authoritative
  std::vector<std::string> warnings;
};

RuleTableFile rule_table_from_json(const nlohmann::json& j);
RuleTableFile load_rule_table(const std::string& path);

EventDistribution distribution_from_json(const nlohmann::json& j);
EventDistribution load_distribution(const std::string& path);

struct RandomScenarioSpec {
  int reporter_count = 0;
  std::vector<Format> formats;
  double r_lo = 0.0;  // reporters drawn uniformly on the annulus [r_lo, r_hi]
  double r_hi = 1.0;  // around the event; r_lo = 0 gives the full disc
  double h0 = 1.0;
};

Scenario random_scenario(const RandomScenarioSpec& spec, std::uint64_t seed);

// six significant digits, shortest form
std::string format_number(double x);

}  // namespace credopt
