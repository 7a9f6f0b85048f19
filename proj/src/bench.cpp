#include "credopt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "credopt/errors.hpp"
#include "credopt/io.hpp"
#include "credopt/rng.hpp"
#include "credopt/solve_dp.hpp"
#include "credopt/solve_flow.hpp"
#include "credopt/solve_structured.hpp"

namespace credopt {

namespace {

Scenario random_ring_scenario(const BenchSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Reporter> reporters;
  for (const RingSpec& ring : spec.rings) {
    const double lo2 = ring.r_lo * ring.r_lo;
    const double hi2 = ring.r_hi * ring.r_hi;
    for (int i = 0; i < ring.count; ++i) {
      const double rad = std::sqrt(lo2 + (hi2 - lo2) * uniform01(rng));
      const double ang = 2.0 * 3.14159265358979323846 * uniform01(rng);
      reporters.push_back({static_cast<int>(reporters.size()) + 1,
                           {rad * std::cos(ang), rad * std::sin(ang)}});
    }
  }
  return Scenario{std::move(reporters), FormatSet(spec.formats),
                  Event{{0.0, 0.0}, spec.h0},    {},
                  CorroborationFn::additive(),   DistanceTransform::None};
}

struct SolveOutcome {
  bool feasible = false;
  double cost = 0.0;
  double credibility = 0.0;
};

SolveOutcome solve_once(const std::string& solver, const CredibilityMatrix& m,
                        const FormatSet& formats, double target, double zeta) {
  std::optional<Assignment> a;
  if (solver == "dp") {
    a = solve_minc_dp({m, formats, target, zeta});
  } else if (solver == "ann") {
    a = solve_minc_ann(preselect_formats(m, formats), target, zeta);
  } else if (solver == "mcf") {
    a = solve_minc_mcf(m, formats, target);
  } else if (solver == "two-format") {
    // cost minimization via the budget form: not provided by this solver
    throw InvariantViolation("two-format solves the budget problem, not cost minimization");
  } else {
    throw InvariantViolation("unknown solver '" + solver + "'");
  }
  if (!a) return {};
  return {true, a->total_cost, a->total_credibility};
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

BenchReport run_bench(const BenchSpec& spec) {
  if (spec.k_grid.empty()) throw InvariantViolation("bench needs a k grid");
  for (int k : spec.k_grid)
    if (k < 1) throw InvariantViolation("bench k values must be >= 1");
  if (spec.repetitions < 1) throw InvariantViolation("bench repetitions must be >= 1");
  if (spec.instances < 1) throw InvariantViolation("bench needs at least one instance");

  BenchReport report;
  double gap_sum = 0.0;
  std::vector<double> ratios;

  for (int inst = 0; inst < spec.instances; ++inst) {
    Scenario s = spec.scenario_file ? load_scenario(*spec.scenario_file)
                                    : random_ring_scenario(spec, spec.seed + inst);
    const std::string event_label =
        spec.scenario_file && spec.instances == 1 ? spec.label
                                                  : spec.label + "#" + std::to_string(inst);
    const CredibilityMatrix m = build_matrix(s);
    const double zeta = default_grid_unit(m);
    const Format& top = s.formats.at(s.formats.size());
    const double unit_cred = top.gamma / std::pow(s.event.h0, top.delta);

    for (int k : spec.k_grid) {
      const double target = k * unit_cred;
      std::map<std::string, BenchRow> cell;
      for (const std::string& solver : spec.solvers) {
        BenchRow row;
        row.event = event_label;
        row.k = k;
        row.solver = solver;
        std::vector<double> times;
        for (int rep = 0; rep < spec.repetitions; ++rep) {
          const auto t0 = std::chrono::steady_clock::now();
          SolveOutcome out;
          try {
            out = solve_once(solver, m, s.formats, target, zeta);
          } catch (const std::exception&) {
            out = {};  // recorded as an infeasible row; the sweep continues
          }
          const auto t1 = std::chrono::steady_clock::now();
          times.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
          row.feasible = out.feasible;
          row.cost = out.cost;
          row.credibility = out.credibility;
        }
        row.runtime_us = median(std::move(times));
        cell[solver] = row;
      }
      auto dp_it = cell.find("dp");
      for (auto& [solver, row] : cell) {
        if (dp_it != cell.end() && dp_it->second.feasible && row.feasible)
          row.gap = dp_it->second.cost > 0 ? (row.cost - dp_it->second.cost) / dp_it->second.cost
                                           : 0.0;
        report.rows.push_back(row);
      }
      auto ann_it = cell.find("ann");
      if (dp_it != cell.end() && ann_it != cell.end() && dp_it->second.feasible &&
          ann_it->second.feasible) {
        report.compared_cells += 1;
        gap_sum += ann_it->second.gap;
        report.max_gap = std::max(report.max_gap, ann_it->second.gap);
        if (ann_it->second.runtime_us > 0)
          ratios.push_back(dp_it->second.runtime_us / ann_it->second.runtime_us);
      }
    }
  }

  if (report.compared_cells > 0) report.mean_gap = gap_sum / report.compared_cells;
  report.median_runtime_ratio = median(std::move(ratios));
  return report;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kBenchCsvHeader << '\n';
  for (const BenchRow& r : rows) {
    out << r.event << ',' << r.k << ',' << r.solver << ',' << (r.feasible ? 1 : 0) << ','
        << format_number(r.cost) << ',' << format_number(r.credibility) << ','
        << format_number(r.runtime_us) << ',' << format_number(r.gap) << '\n';
  }
  return out.str();
}

}  // namespace credopt
