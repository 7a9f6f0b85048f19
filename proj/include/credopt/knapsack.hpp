#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace credopt {

// One option of a multiple-choice knapsack item. Option order is meaningful:
// on equal value the earlier option wins.
struct McOption {
  double value = 0.0;
  std::int64_t units = 0;  // non-negative integer weight
};

struct McItem {
  std::vector<McOption> options;
};

struct McSolution {
  double value = 0.0;
  std::vector<int> option;  // chosen option index per item
};

// Maximize total value picking exactly one option per item, subject to total
// units <= capacity. Values may be any finite reals. Returns nullopt when no
// combination of options fits the capacity.
std::optional<McSolution> solve_multiple_choice(const std::vector<McItem>& items,
                                                std::int64_t capacity);

// Grid conversion with a one-in-1e9 nudge so grid-aligned reals land exactly
// despite float division noise.
std::int64_t units_floor(double x, double unit);
std::int64_t units_ceil(double x, double unit);

}  // namespace credopt
