#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "credopt/model.hpp"

namespace credopt {

// One ring of reporters drawn area-uniform on the annulus [r_lo, r_hi]
// around the event; r_lo = 0 covers the full disc.
struct RingSpec {
  int count = 0;
  double r_lo = 0.0;
  double r_hi = 1.0;
};

// Cost-minimization study: for each instance and each k, solve for the target
// C = k * (top-format credibility at the clamp distance) with every listed
// solver and compare against the exact reference.
struct BenchSpec {
  std::string label = "random";
  std::optional<std::string> scenario_file;  // fixed topology; else random rings
  std::vector<RingSpec> rings;
  std::vector<Format> formats;  // for the random source
  double h0 = 1.0;
  std::vector<int> k_grid;
  std::vector<std::string> solvers = {"dp", "ann"};  // dp | ann | mcf | two-format
  int instances = 1;     // independent random topologies
  int repetitions = 1;   // runtime = median over repetitions
  std::uint64_t seed = 7;
};

struct BenchRow {
  std::string event;  // label, or label#i for random instances
  int k = 0;
  std::string solver;
  bool feasible = false;
  double cost = 0.0;
  double credibility = 0.0;
  double runtime_us = 0.0;
  double gap = 0.0;  // (cost - reference cost) / reference cost; 0 for the reference
};

struct BenchReport {
  std::vector<BenchRow> rows;
  // aggregates over (event, k) cells where both dp and ann were feasible
  double mean_gap = 0.0;
  double max_gap = 0.0;
  double median_runtime_ratio = 0.0;  // dp runtime / ann runtime
  int compared_cells = 0;
};

inline constexpr const char* kBenchCsvHeader =
    "event,k,solver,feasible,cost,credibility,runtime_us,gap";

BenchReport run_bench(const BenchSpec& spec);
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace credopt
