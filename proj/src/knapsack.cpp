#include "credopt/knapsack.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "credopt/errors.hpp"

namespace credopt {

std::int64_t units_floor(double x, double unit) {
  return static_cast<std::int64_t>(std::floor(x / unit + 1e-9));
}

std::int64_t units_ceil(double x, double unit) {
  return static_cast<std::int64_t>(std::ceil(x / unit - 1e-9));
}

std::optional<McSolution> solve_multiple_choice(const std::vector<McItem>& items,
                                                std::int64_t capacity) {
  if (capacity < 0) return std::nullopt;
  const size_t n = items.size();
  const size_t width = static_cast<size_t>(capacity) + 1;
  if (n * width > (size_t{1} << 28))
    throw TooLarge("multiple-choice knapsack table too large");
  for (const McItem& item : items) {
    if (item.options.empty()) throw std::invalid_argument("knapsack item with no options");
    if (item.options.size() > 255) throw std::invalid_argument("more than 255 options per item");
    for (const McOption& o : item.options)
      if (o.units < 0) throw std::invalid_argument("negative option units");
  }

  constexpr double kUnreachable = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(width, 0.0), cur(width);
  // back[l * width + s] = option chosen for item l at capacity s
  std::vector<std::uint8_t> back(n * width);

  for (size_t l = 0; l < n; ++l) {
    const auto& opts = items[l].options;
    std::uint8_t* bl = back.data() + l * width;
    for (size_t s = 0; s < width; ++s) {
      double best = kUnreachable;
      std::uint8_t pick = 0;
      for (size_t k = 0; k < opts.size(); ++k) {
        const std::int64_t u = opts[k].units;
        if (u > static_cast<std::int64_t>(s)) continue;
        const double base = prev[s - static_cast<size_t>(u)];
        if (base == kUnreachable) continue;
        const double v = base + opts[k].value;
        if (v > best) {
          best = v;
          pick = static_cast<std::uint8_t>(k);
        }
      }
      cur[s] = best;
      bl[s] = pick;
    }
    std::swap(prev, cur);
  }

  if (prev[width - 1] == kUnreachable) return std::nullopt;
  McSolution sol;
  sol.value = prev[width - 1];
  sol.option.assign(n, 0);
  std::int64_t s = capacity;
  for (size_t l = n; l-- > 0;) {
    const int k = back[l * width + static_cast<size_t>(s)];
    sol.option[l] = k;
    s -= items[l].options[static_cast<size_t>(k)].units;
  }
  return sol;
}

}  // namespace credopt
