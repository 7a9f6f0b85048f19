#include "credopt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "credopt/errors.hpp"
#include "credopt/rng.hpp"

namespace credopt {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key '") + key + "'");
  return *it;
}

double as_number(const json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return j;
}

Point point_from(const json& j, const char* what) {
  return {as_number(require(j, "x"), what), as_number(require(j, "y"), what)};
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  std::vector<Reporter> reporters;
  const json& jr = require(j, "reporters");
  if (!jr.is_array() || jr.empty()) throw ParseError("reporters must be a non-empty array");
  for (size_t i = 0; i < jr.size(); ++i) {
    Reporter r;
    r.id = jr[i].contains("id") ? jr[i]["id"].get<int>() : static_cast<int>(i) + 1;
    r.position = point_from(jr[i], "reporter position");
    reporters.push_back(r);
  }

  std::vector<Format> formats;
  const json& jf = require(j, "formats");
  if (!jf.is_array() || jf.empty()) throw ParseError("formats must be a non-empty array");
  for (const json& f : jf) {
    Format fmt;
    fmt.gamma = as_number(require(f, "gamma"), "format gamma");
    fmt.delta = as_number(require(f, "delta"), "format delta");
    fmt.cost = as_number(require(f, "cost"), "format cost");
    formats.push_back(fmt);
  }

  Event event;
  const json& je = require(j, "event");
  event.location = point_from(je, "event location");
  if (je.contains("h0")) event.h0 = as_number(je["h0"], "event h0");

  Scenario s{reporters, FormatSet(std::move(formats)), event, {}, CorroborationFn::additive(),
             DistanceTransform::None};

  if (j.contains("noise")) {
    for (const json& n : j["noise"]) {
      NoiseSource src;
      src.position = point_from(n, "noise position");
      src.sigma = as_number(require(n, "sigma"), "noise sigma");
      s.noise.push_back(src);
    }
  }

  if (j.contains("corroboration")) {
    const json& jc = j["corroboration"];
    const std::string kind = require(jc, "kind").get<std::string>();
    if (kind == "additive") {
      s.corroboration = CorroborationFn::additive();
    } else if (kind == "table") {
      std::vector<std::pair<double, double>> pts;
      for (const json& p : require(jc, "points")) {
        if (!p.is_array() || p.size() != 2) throw ParseError("corroboration points must be pairs");
        pts.emplace_back(as_number(p[0], "corroboration x"), as_number(p[1], "corroboration y"));
      }
      s.corroboration = CorroborationFn::table(std::move(pts));
    } else {
      throw ParseError("corroboration kind must be 'additive' or 'table'");
    }
  }

  if (j.contains("distance_transform")) {
    const std::string t = j["distance_transform"].get<std::string>();
    if (t == "none")
      s.transform = DistanceTransform::None;
    else if (t == "log10")
      s.transform = DistanceTransform::Log10;
    else
      throw ParseError("distance_transform must be 'none' or 'log10'");
  }

  validate(s);
  return s;
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["reporters"] = json::array();
  for (const Reporter& r : s.reporters)
    j["reporters"].push_back({{"id", r.id}, {"x", r.position.x}, {"y", r.position.y}});
  j["formats"] = json::array();
  for (const Format& f : s.formats.all())
    j["formats"].push_back({{"gamma", f.gamma}, {"delta", f.delta}, {"cost", f.cost}});
  j["event"] = {{"x", s.event.location.x}, {"y", s.event.location.y}, {"h0", s.event.h0}};
  if (!s.noise.empty()) {
    j["noise"] = json::array();
    for (const NoiseSource& n : s.noise)
      j["noise"].push_back({{"x", n.position.x}, {"y", n.position.y}, {"sigma", n.sigma}});
  }
  if (s.corroboration.is_additive()) {
    j["corroboration"] = {{"kind", "additive"}};
  } else {
    json pts = json::array();
    for (const auto& [x, y] : s.corroboration.points()) pts.push_back({x, y});
    j["corroboration"] = {{"kind", "table"}, {"points", pts}};
  }
  j["distance_transform"] = s.transform == DistanceTransform::Log10 ? "log10" : "none";
  return j;
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(load_json(path)); }

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << scenario_to_json(s).dump(2) << '\n';
}

RuleTableFile rule_table_from_json(const json& j) {
  std::vector<double> costs;
  for (const json& c : require(j, "format_costs")) costs.push_back(as_number(c, "format cost"));
  if (costs.empty()) throw ParseError("format_costs must be non-empty");

  // categories keyed by format id; boundaries [b0, b1, ..., bm] become the
  // ranges [b0,b1), ..., [b(m-1),bm)
  std::map<int, std::vector<double>> bounds;
  for (const auto& [key, val] : require(j, "categories").items()) {
    int fid = 0;
    try {
      fid = std::stoi(key);
    } catch (const std::exception&) {
      throw ParseError("category key '" + key + "' is not a format id");
    }
    if (fid < 1 || fid > static_cast<int>(costs.size()))
      throw ParseError("category format id " + key + " out of range");
    std::vector<double> b;
    for (const json& x : val) b.push_back(as_number(x, "category boundary"));
    if (b.size() < 2) throw ParseError("format " + key + " needs at least two boundaries");
    bounds[fid] = std::move(b);
  }

  std::vector<RuleCategory> categories;
  std::map<std::pair<int, int>, int> slot;  // (format, local range) -> global index
  for (const auto& [fid, b] : bounds) {
    for (size_t q = 0; q + 1 < b.size(); ++q) {
      slot[{fid, static_cast<int>(q)}] = static_cast<int>(categories.size());
      categories.push_back({fid, b[q], b[q + 1]});
    }
  }

  struct Parsed {
    Rule rule;
    size_t position;  // 1-based position in the file, for warnings
    double recomputed;
  };
  std::vector<Parsed> parsed;
  const json& jr = require(j, "rules");
  if (!jr.is_array() || jr.empty()) throw ParseError("rules must be a non-empty array");
  for (size_t k = 0; k < jr.size(); ++k) {
    Parsed p;
    p.position = k + 1;
    p.rule.cost = as_number(require(jr[k], "cost"), "rule cost");
    p.rule.required.assign(categories.size(), 0);
    for (const auto& [key, val] : require(jr[k], "requirements").items()) {
      const size_t colon = key.find(':');
      if (colon == std::string::npos)
        throw ParseError("requirement key '" + key + "' must look like 'format:range'");
      int fid = 0, range = 0;
      try {
        fid = std::stoi(key.substr(0, colon));
        range = std::stoi(key.substr(colon + 1));
      } catch (const std::exception&) {
        throw ParseError("requirement key '" + key + "' must look like 'format:range'");
      }
      auto it = slot.find({fid, range});
      if (it == slot.end())
        throw ParseError("requirement key '" + key + "' names an unknown category");
      const int count = val.get<int>();
      if (count < 0) throw ParseError("requirement key '" + key + "' has a negative count");
      p.rule.required[static_cast<size_t>(it->second)] = count;
    }
    p.recomputed = 0;
    for (size_t g = 0; g < categories.size(); ++g)
      p.recomputed +=
          p.rule.required[g] * costs[static_cast<size_t>(categories[g].format_id) - 1];
    parsed.push_back(std::move(p));
  }

  std::stable_sort(parsed.begin(), parsed.end(),
                   [](const Parsed& a, const Parsed& b) { return a.rule.cost < b.rule.cost; });

  std::vector<Rule> rules;
  std::vector<std::string> warnings;
  for (const Parsed& p : parsed) {
    if (std::abs(p.recomputed - p.rule.cost) > 1e-9 * std::max(1.0, std::abs(p.rule.cost)))
      warnings.push_back("rule at position " + std::to_string(p.position) + ": stored cost " +
                         format_number(p.rule.cost) + " != recomputed " +
                         format_number(p.recomputed) + " from format costs");
    rules.push_back(p.rule);
  }

  return RuleTableFile{std::move(costs), RuleTable(std::move(categories), std::move(rules)),
                       std::move(warnings)};
}

RuleTableFile load_rule_table(const std::string& path) {
  return rule_table_from_json(load_json(path));
}

EventDistribution distribution_from_json(const json& j) {
  const std::string kind = require(j, "kind").get<std::string>();
  EventDistribution d{EventDistribution::Kind::Deterministic,
                      scenario_from_json(require(j, "base")),
                      {}, 0.5, 0.0, 0.9, 0.9, false};
  if (kind == "deterministic") {
    d.kind = EventDistribution::Kind::Deterministic;
  } else if (kind == "two_point") {
    d.kind = EventDistribution::Kind::TwoPoint;
    d.alt = scenario_from_json(require(j, "alt"));
    if (j.contains("p")) d.p = as_number(j["p"], "p");
    if (!(d.p >= 0 && d.p <= 1)) throw ParseError("p must lie in [0, 1]");
  } else if (kind == "jitter") {
    d.kind = EventDistribution::Kind::Jitter;
    d.jitter_radius = as_number(require(j, "jitter_radius"), "jitter_radius");
    if (d.jitter_radius < 0) throw ParseError("jitter_radius must be non-negative");
  } else if (kind == "markov") {
    d.kind = EventDistribution::Kind::Markov;
    d.alt = scenario_from_json(require(j, "alt"));
    if (j.contains("stay_base")) d.stay_base = as_number(j["stay_base"], "stay_base");
    if (j.contains("stay_alt")) d.stay_alt = as_number(j["stay_alt"], "stay_alt");
  } else {
    throw ParseError("kind must be deterministic, two_point, jitter, or markov");
  }
  if (j.contains("exponential_durations"))
    d.exponential_durations = j["exponential_durations"].get<bool>();
  return d;
}

EventDistribution load_distribution(const std::string& path) {
  return distribution_from_json(load_json(path));
}

Scenario random_scenario(const RandomScenarioSpec& spec, std::uint64_t seed) {
  if (spec.reporter_count < 1) throw InvariantViolation("random scenario needs reporters");
  if (!(spec.r_lo >= 0 && spec.r_hi > spec.r_lo))
    throw InvariantViolation("random scenario needs 0 <= r_lo < r_hi");
  Rng rng(seed);
  std::vector<Reporter> reporters;
  const double lo2 = spec.r_lo * spec.r_lo;
  const double hi2 = spec.r_hi * spec.r_hi;
  for (int i = 0; i < spec.reporter_count; ++i) {
    // area-uniform over the annulus: radius = sqrt of a uniform squared-radius
    const double rad = std::sqrt(lo2 + (hi2 - lo2) * uniform01(rng));
    const double ang = 2.0 * 3.14159265358979323846 * uniform01(rng);
    reporters.push_back({i + 1, {rad * std::cos(ang), rad * std::sin(ang)}});
  }
  return Scenario{std::move(reporters), FormatSet(spec.formats),
                  Event{{0.0, 0.0}, spec.h0},    {},
                  CorroborationFn::additive(),   DistanceTransform::None};
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace credopt
