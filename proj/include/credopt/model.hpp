#pragma once

#include <utility>
#include <vector>

namespace credopt {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct Format {
  int id = 0;          // 1-based position within its FormatSet
  double gamma = 1.0;  // credibility scale at the clamp distance
  double delta = 1.0;  // power-law decay exponent
  double cost = 1.0;   // cost of one report in this format
};

// Ordered format list. Construction enforces gamma non-decreasing and delta
// strictly decreasing with id, and positive gamma/delta/cost.
class FormatSet {
 public:
  explicit FormatSet(std::vector<Format> formats);

  int size() const { return static_cast<int>(formats_.size()); }
  const Format& at(int id) const { return formats_.at(static_cast<size_t>(id) - 1); }
  const std::vector<Format>& all() const { return formats_; }
  bool equal_gamma() const;

 private:
  std::vector<Format> formats_;
};

struct Reporter {
  int id = 0;
  Point position;
};

struct Event {
  Point location;
  double h0 = 1.0;  // minimum (clamp) distance, > 0
};

struct NoiseSource {
  Point position;
  double sigma = 1.0;  // strength/effective range, > 0
};

// Additive identity or a piecewise-linear non-decreasing map. The table form
// clamps outside its breakpoint range.
class CorroborationFn {
 public:
  static CorroborationFn additive();
  static CorroborationFn table(std::vector<std::pair<double, double>> points);

  bool is_additive() const { return additive_; }
  double operator()(double sum) const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }

 private:
  bool additive_ = true;
  std::vector<std::pair<double, double>> points_;
};

enum class DistanceTransform { None, Log10 };

struct Scenario {
  std::vector<Reporter> reporters;
  FormatSet formats;
  Event event;
  std::vector<NoiseSource> noise;
  CorroborationFn corroboration = CorroborationFn::additive();
  DistanceTransform transform = DistanceTransform::None;
};

// Throws InvariantViolation on empty reporters or duplicate reporter ids.
void validate(const Scenario& s);

struct CredibilityMatrix {
  std::vector<std::vector<double>> values;  // [reporter][format-1], noise applied
  std::vector<double> distances;            // kernel-space reporter-event distance

  int reporter_count() const { return static_cast<int>(values.size()); }
  int format_count() const { return values.empty() ? 0 : static_cast<int>(values[0].size()); }
};

// Power-law kernel on an already-computed distance.
double credibility_at(double d, const Format& f, double h0);
double credibility(const Reporter& r, const Format& f, const Event& e);
double noise_factor(const Reporter& r, const NoiseSource& s);
double noisy_credibility(double base, const Reporter& r, const std::vector<NoiseSource>& noise);

// Noise distances stay Euclidean; the optional log10 transform applies only to
// the reporter-event distance fed into the power-law kernel.
CredibilityMatrix build_matrix(const Scenario& s);

double corroborate(const CorroborationFn& fn, const std::vector<double>& credibilities);

struct ThresholdAnalysis {
  // h[k-1] = distance where format k stops beating format k+1 on
  // credibility-per-unit-cost (R-1 entries)
  std::vector<double> h;
  // longest strictly increasing run of h (1-based indices into h); when several
  // exist, the lexicographically smallest index sequence
  std::vector<int> chain;
  // chain formats plus the format after the last chain entry
  std::vector<int> usable_formats;
};

// Closed form when all gamma are equal; otherwise bisection on [h0, 1e9] at
// 1e-9 relative tolerance. Rejects fewer than two formats.
ThresholdAnalysis format_thresholds(const FormatSet& formats, double h0 = 1.0);

}  // namespace credopt
