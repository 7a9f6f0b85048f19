#include "credopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "credopt/errors.hpp"

namespace credopt {

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

FormatSet::FormatSet(std::vector<Format> formats) : formats_(std::move(formats)) {
  if (formats_.empty()) throw InvariantViolation("FormatSet: at least one format required");
  bool ids_given = false;
  for (const Format& f : formats_) {
    if (f.id != 0) ids_given = true;
  }
  for (size_t i = 0; i < formats_.size(); ++i) {
    Format& f = formats_[i];
    const int expect = static_cast<int>(i) + 1;
    if (ids_given && f.id != expect)
      throw InvariantViolation("FormatSet: ids must run 1.." + std::to_string(formats_.size()) +
                               " in order (got " + std::to_string(f.id) + " at position " +
                               std::to_string(expect) + ")");
    f.id = expect;
    if (!(f.gamma > 0)) throw InvariantViolation("FormatSet: gamma must be > 0 (format " + std::to_string(expect) + ")");
    if (!(f.delta > 0)) throw InvariantViolation("FormatSet: delta must be > 0 (format " + std::to_string(expect) + ")");
    if (!(f.cost > 0)) throw InvariantViolation("FormatSet: cost must be > 0 (format " + std::to_string(expect) + ")");
    if (i > 0) {
      if (formats_[i - 1].gamma > f.gamma)
        throw InvariantViolation("FormatSet: gamma must be non-decreasing (formats " +
                                 std::to_string(expect - 1) + " and " + std::to_string(expect) + ")");
      if (!(formats_[i - 1].delta > f.delta))
        throw InvariantViolation("FormatSet: delta must be strictly decreasing (formats " +
                                 std::to_string(expect - 1) + " and " + std::to_string(expect) + ")");
    }
  }
}

bool FormatSet::equal_gamma() const {
  for (const Format& f : formats_)
    if (f.gamma != formats_.front().gamma) return false;
  return true;
}

CorroborationFn CorroborationFn::additive() { return CorroborationFn{}; }

CorroborationFn CorroborationFn::table(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw InvariantViolation("corroboration table: at least one breakpoint required");
  for (size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second))
      throw InvariantViolation("corroboration table: breakpoints must be finite");
    if (i > 0) {
      if (!(points[i - 1].first < points[i].first))
        throw InvariantViolation("corroboration table: x breakpoints must be strictly increasing");
      if (points[i - 1].second > points[i].second)
        throw InvariantViolation("corroboration table: values must be non-decreasing");
    }
  }
  CorroborationFn fn;
  fn.additive_ = false;
  fn.points_ = std::move(points);
  return fn;
}

double CorroborationFn::operator()(double sum) const {
  if (additive_) return sum;
  if (sum <= points_.front().first) return points_.front().second;
  if (sum >= points_.back().first) return points_.back().second;
  auto it = std::upper_bound(points_.begin(), points_.end(), sum,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (sum - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

void validate(const Scenario& s) {
  if (s.reporters.empty()) throw InvariantViolation("scenario: at least one reporter required");
  std::unordered_set<int> seen;
  for (const Reporter& r : s.reporters)
    if (!seen.insert(r.id).second)
      throw InvariantViolation("scenario: duplicate reporter id " + std::to_string(r.id));
  if (!(s.event.h0 > 0)) throw InvariantViolation("scenario: event h0 must be > 0");
  for (const NoiseSource& n : s.noise)
    if (!(n.sigma > 0)) throw InvariantViolation("scenario: noise sigma must be > 0");
}

double credibility_at(double d, const Format& f, double h0) {
  return f.gamma / std::pow(std::max(d, h0), f.delta);
}

double credibility(const Reporter& r, const Format& f, const Event& e) {
  return credibility_at(distance(r.position, e.location), f, e.h0);
}

double noise_factor(const Reporter& r, const NoiseSource& s) {
  return 1.0 / std::pow(1.0 + distance(r.position, s.position), 1.0 / s.sigma);
}

double noisy_credibility(double base, const Reporter& r, const std::vector<NoiseSource>& noise) {
  double c = base;
  for (const NoiseSource& s : noise) c *= 1.0 - noise_factor(r, s);
  return c;
}

CredibilityMatrix build_matrix(const Scenario& s) {
  validate(s);
  const int n = static_cast<int>(s.reporters.size());
  const int r = s.formats.size();
  CredibilityMatrix m;
  m.values.assign(n, std::vector<double>(r, 0.0));
  m.distances.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const Reporter& rep = s.reporters[i];
    double d = distance(rep.position, s.event.location);
    if (s.transform == DistanceTransform::Log10) d = std::log10(d);
    m.distances[i] = d;
    for (int j = 0; j < r; ++j) {
      const double base = credibility_at(d, s.formats.at(j + 1), s.event.h0);
      m.values[i][j] = noisy_credibility(base, rep, s.noise);
    }
  }
  return m;
}

double corroborate(const CorroborationFn& fn, const std::vector<double>& credibilities) {
  double sum = 0.0;
  for (double c : credibilities) sum += c;
  return fn(sum);
}

namespace {

// Distance where formats k and k+1 tie on credibility-per-unit-cost,
// restricted to [h0, 1e9]; endpoints mean "already tied or crossed at h0" and
// "never crosses", respectively.
double crossover_bisect(const Format& a, const Format& b, double h0) {
  auto ratio_gap = [&](double d) {
    return a.gamma / (std::pow(d, a.delta) * a.cost) - b.gamma / (std::pow(d, b.delta) * b.cost);
  };
  double lo = h0, hi = 1e9;
  if (ratio_gap(lo) <= 0) return lo;
  if (ratio_gap(hi) > 0) return hi;
  while ((hi - lo) > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (ratio_gap(mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

ThresholdAnalysis format_thresholds(const FormatSet& formats, double h0) {
  const int r = formats.size();
  if (r < 2) throw InvariantViolation("format_thresholds: at least two formats required");
  ThresholdAnalysis out;
  out.h.reserve(r - 1);
  for (int k = 1; k < r; ++k) {
    const Format& a = formats.at(k);
    const Format& b = formats.at(k + 1);
    if (a.gamma == b.gamma) {
      // same endpoint conventions as the bisection: a crossover below the
      // clamp distance collapses to h0, one past the span caps at 1e9
      out.h.push_back(
          std::clamp(std::pow(b.cost / a.cost, 1.0 / (a.delta - b.delta)), h0, 1e9));
    } else {
      out.h.push_back(crossover_bisect(a, b, h0));
    }
  }

  // Longest strictly increasing run; among equals, the lexicographically
  // smallest index sequence.
  const int m = static_cast<int>(out.h.size());
  std::vector<int> len_start(m, 1);
  for (int i = m - 1; i >= 0; --i)
    for (int j = i + 1; j < m; ++j)
      if (out.h[i] < out.h[j]) len_start[i] = std::max(len_start[i], 1 + len_start[j]);
  int need = *std::max_element(len_start.begin(), len_start.end());
  double last = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m && need > 0; ++i) {
    if (len_start[i] == need && out.h[i] > last) {
      out.chain.push_back(i + 1);
      last = out.h[i];
      --need;
    }
  }
  out.usable_formats = out.chain;
  out.usable_formats.push_back(out.chain.back() + 1);
  return out;
}

}  // namespace credopt
