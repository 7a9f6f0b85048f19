#include "credopt/renewals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "credopt/errors.hpp"
#include "credopt/knapsack.hpp"

namespace credopt {

VirtualQueueState queue_update(const VirtualQueueState& z, const std::vector<double>& y) {
  if (z.z.size() != y.size()) throw InvariantViolation("queue update dimension mismatch");
  VirtualQueueState out = z;
  for (size_t m = 0; m < y.size(); ++m) out.z[m] = std::max(out.z[m] + y[m], 0.0);
  return out;
}

namespace {

// Minimize sum of per-reporter option weights (idle = 0) subject to an
// optional per-frame credibility floor. The floor flips into a knapsack
// capacity through the complement units (row total minus the chosen cell);
// with the floor off all units are zero and the DP degenerates to per-item
// scans, still through the same table-and-backpointer machinery.
std::vector<int> weighted_min_choices(const CredibilityMatrix& m,
                                      const std::vector<std::vector<double>>& w, double c_min) {
  const int n = m.reporter_count();
  const int r = m.format_count();
  std::vector<McItem> items(n);
  std::int64_t capacity = 0;

  if (c_min > 0) {
    const double zeta = default_grid_unit(m);
    std::int64_t total = 0;
    std::vector<std::int64_t> row_units(n, 0);
    std::vector<std::vector<std::int64_t>> u(n, std::vector<std::int64_t>(r));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < r; ++j) {
        u[i][j] = units_floor(m.values[i][j], zeta);
        row_units[i] += u[i][j];
      }
      total += row_units[i];
    }
    capacity = total - units_ceil(c_min, zeta);
    if (capacity < 0) throw InfeasibleFrame("credibility floor unreachable this frame");
    for (int i = 0; i < n; ++i) {
      auto& opts = items[i].options;
      opts.resize(r + 1);
      opts[0] = {0.0, row_units[i]};
      for (int j = 0; j < r; ++j) opts[j + 1] = {-w[i][j], row_units[i] - u[i][j]};
    }
  } else {
    for (int i = 0; i < n; ++i) {
      auto& opts = items[i].options;
      opts.resize(r + 1);
      opts[0] = {0.0, 0};
      for (int j = 0; j < r; ++j) opts[j + 1] = {-w[i][j], 0};
    }
  }

  auto sol = solve_multiple_choice(items, capacity);
  if (!sol) throw InfeasibleFrame("credibility floor unreachable this frame");
  return sol->option;
}

// Preselect the lightest format per reporter, then binary-select under the
// floor; the approximate frame solver mode.
std::vector<int> weighted_min_choices_ann(const CredibilityMatrix& m,
                                          const std::vector<std::vector<double>>& w,
                                          double c_min) {
  const int n = m.reporter_count();
  const int r = m.format_count();
  std::vector<int> pick(n, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 2; j <= r; ++j)
      if (w[i][j - 1] < w[i][pick[i] - 1]) pick[i] = j;

  const double zeta = default_grid_unit(m);
  std::vector<McItem> items(n);
  std::int64_t capacity = 0;
  if (c_min > 0) {
    std::int64_t total = 0;
    std::vector<std::int64_t> u(n);
    for (int i = 0; i < n; ++i) {
      u[i] = units_floor(m.values[i][pick[i] - 1], zeta);
      total += u[i];
    }
    capacity = total - units_ceil(c_min, zeta);
    if (capacity < 0) throw InfeasibleFrame("credibility floor unreachable this frame");
    for (int i = 0; i < n; ++i)
      items[i].options = {{0.0, u[i]}, {-w[i][pick[i] - 1], 0}};
  } else {
    for (int i = 0; i < n; ++i) items[i].options = {{0.0, 0}, {-w[i][pick[i] - 1], 0}};
  }
  auto sol = solve_multiple_choice(items, capacity);
  if (!sol) throw InfeasibleFrame("credibility floor unreachable this frame");
  std::vector<int> choices(n, 0);
  for (int i = 0; i < n; ++i)
    if (sol->option[i] == 1) choices[i] = pick[i];
  return choices;
}

void frame_totals(const FrameEvent& ev, const std::vector<int>& choices, double* cost,
                  double* cred) {
  *cost = 0;
  *cred = 0;
  for (size_t i = 0; i < choices.size(); ++i) {
    const int j = choices[i];
    if (j == 0) continue;
    *cost += ev.costs[static_cast<size_t>(j) - 1];
    *cred += ev.matrix.values[i][static_cast<size_t>(j) - 1];
  }
}

std::vector<std::vector<double>> drift_weights(const FrameEvent& ev, double cost_scale,
                                               double cred_scale) {
  const int n = ev.matrix.reporter_count();
  const int r = ev.matrix.format_count();
  std::vector<std::vector<double>> w(n, std::vector<double>(r));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < r; ++j)
      w[i][j] = cost_scale * ev.costs[j] - cred_scale * ev.matrix.values[i][j];
  return w;
}

}  // namespace

StepResult step_maxcs(const FrameEvent& ev, double z1, const ControllerConfig& cfg) {
  const auto& con = std::get<MaxCSConstraint>(cfg.constraint);
  const auto w = drift_weights(ev, z1, cfg.v);
  std::vector<int> choices = cfg.frame_solver == ControllerConfig::FrameSolver::Ann
                                 ? weighted_min_choices_ann(ev.matrix, w, con.c_min)
                                 : weighted_min_choices(ev.matrix, w, con.c_min);
  StepResult res;
  res.choices = std::move(choices);
  frame_totals(ev, res.choices, &res.cost, &res.credibility);
  res.y = {res.cost - con.e_av};
  return res;
}

std::vector<int> step_decentralized(const FrameEvent& ev, double z1, double v) {
  const int n = ev.matrix.reporter_count();
  const int r = ev.matrix.format_count();
  std::vector<int> choices(n, 0);
  for (int i = 0; i < n; ++i) {
    double best = 0.0;  // idle
    for (int j = 1; j <= r; ++j) {
      const double w = z1 * ev.costs[static_cast<size_t>(j) - 1] -
                       v * ev.matrix.values[i][static_cast<size_t>(j) - 1];
      if (w < best) {
        best = w;
        choices[i] = j;
      }
    }
  }
  return choices;
}

StepResult step_mincs(const FrameEvent& ev, double z1, const ControllerConfig& cfg) {
  const auto& con = std::get<MinCSConstraint>(cfg.constraint);
  const auto w = drift_weights(ev, cfg.v, z1);
  std::vector<int> choices = cfg.frame_solver == ControllerConfig::FrameSolver::Ann
                                 ? weighted_min_choices_ann(ev.matrix, w, 0.0)
                                 : weighted_min_choices(ev.matrix, w, 0.0);
  StepResult res;
  res.choices = std::move(choices);
  frame_totals(ev, res.choices, &res.cost, &res.credibility);
  res.y = {con.c_av - res.credibility};
  return res;
}

StepResult step_power_aware(const FrameEvent& ev, const std::vector<double>& z,
                            const ControllerConfig& cfg) {
  const auto& con = std::get<PowerAwareConstraint>(cfg.constraint);
  const int n = ev.matrix.reporter_count();
  const int r = ev.matrix.format_count();
  if (static_cast<int>(z.size()) != n) throw InvariantViolation("power queue size mismatch");

  auto power_of = [&](int i, int j) {
    return ev.power.empty() ? ev.costs[static_cast<size_t>(j)] : ev.power[i][static_cast<size_t>(j)];
  };
  auto bandwidth_of = [&](int j) {
    return ev.bandwidth.empty() ? ev.costs[static_cast<size_t>(j)] : ev.bandwidth[static_cast<size_t>(j)];
  };

  // credibility floor dimension (clamped at the requirement) x bandwidth cap
  const double zeta = default_grid_unit(ev.matrix);
  double bmax_cell = 0;
  for (int j = 0; j < r; ++j) bmax_cell = std::max(bmax_cell, bandwidth_of(j));
  const double eta = bmax_cell > 0 ? 1e-3 * bmax_cell : 1e-3;

  const std::int64_t need = con.c_min > 0 ? units_ceil(con.c_min, zeta) : 0;
  const std::int64_t cap = std::max<std::int64_t>(units_floor(con.b_max, eta), 0);
  const size_t w1 = static_cast<size_t>(need) + 1;
  const size_t w2 = static_cast<size_t>(cap) + 1;

  constexpr double kBad = -std::numeric_limits<double>::infinity();
  std::vector<double> prev(w1 * w2, kBad), cur(w1 * w2);
  // floor met trivially at s1 = 0, any unused bandwidth budget is fine
  for (size_t s2 = 0; s2 < w2; ++s2) prev[s2] = 0.0;
  std::vector<std::uint8_t> back(static_cast<size_t>(n) * w1 * w2);

  for (int i = 0; i < n; ++i) {
    std::uint8_t* bi = back.data() + static_cast<size_t>(i) * w1 * w2;
    for (size_t s1 = 0; s1 < w1; ++s1) {
      for (size_t s2 = 0; s2 < w2; ++s2) {
        double best = prev[s1 * w2 + s2];  // idle
        std::uint8_t pick = 0;
        for (int j = 0; j < r; ++j) {
          const std::int64_t du = units_floor(ev.matrix.values[i][j], zeta);
          const std::int64_t db = units_ceil(bandwidth_of(j), eta);
          if (db > static_cast<std::int64_t>(s2)) continue;
          const std::int64_t from1 = std::max<std::int64_t>(static_cast<std::int64_t>(s1) - du, 0);
          const double base = prev[static_cast<size_t>(from1) * w2 + (s2 - static_cast<size_t>(db))];
          if (base == kBad) continue;
          const double v = base + cfg.v * ev.matrix.values[i][j] - z[i] * power_of(i, j);
          if (v > best) {
            best = v;
            pick = static_cast<std::uint8_t>(j + 1);
          }
        }
        cur[s1 * w2 + s2] = best;
        bi[s1 * w2 + s2] = pick;
      }
    }
    std::swap(prev, cur);
  }

  if (prev[(w1 - 1) * w2 + (w2 - 1)] == kBad)
    throw InfeasibleFrame("credibility floor unreachable under the bandwidth cap");

  StepResult res;
  res.choices.assign(n, 0);
  std::int64_t s1 = need, s2 = cap;
  for (int i = n - 1; i >= 0; --i) {
    const int pick = back[static_cast<size_t>(i) * w1 * w2 + static_cast<size_t>(s1) * w2 +
                          static_cast<size_t>(s2)];
    res.choices[i] = pick;
    if (pick > 0) {
      s1 = std::max<std::int64_t>(s1 - units_floor(ev.matrix.values[i][pick - 1], zeta), 0);
      s2 -= units_ceil(bandwidth_of(pick - 1), eta);
    }
  }
  frame_totals(ev, res.choices, &res.cost, &res.credibility);
  res.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = res.choices[i];
    const double p = j == 0 ? 0.0 : power_of(i, j - 1);
    res.y[i] = p - con.p_av[i] * ev.duration;
  }
  return res;
}

namespace {

template <typename Source>
FrameTrace run_impl(const ControllerConfig& cfg, Source&& source, std::int64_t frames) {
  FrameTrace trace;
  const bool maxcs = std::holds_alternative<MaxCSConstraint>(cfg.constraint);
  const bool mincs = std::holds_alternative<MinCSConstraint>(cfg.constraint);
  if (cfg.decentralized) {
    if (!maxcs && !mincs)
      throw InvariantViolation("decentralized mode applies to maxcs/mincs only");
    if (maxcs && std::get<MaxCSConstraint>(cfg.constraint).c_min != 0)
      throw InvariantViolation("decentralized mode requires the credibility floor off");
  }

  VirtualQueueState z;
  bool z_init = false;
  double sum_cost = 0, sum_cred = 0;
  trace.frames.reserve(static_cast<size_t>(frames));

  for (std::int64_t k = 0; k < frames; ++k) {
    FrameEvent ev = source(k);
    if (!z_init) {
      size_t m = 1;
      if (std::holds_alternative<PowerAwareConstraint>(cfg.constraint))
        m = static_cast<size_t>(ev.matrix.reporter_count());
      z.z.assign(m, 0.0);
      trace.y_sum.assign(m, 0.0);
      z_init = true;
    }

    StepResult sr;
    if (maxcs) {
      if (cfg.decentralized) {
        const auto& con = std::get<MaxCSConstraint>(cfg.constraint);
        sr.choices = step_decentralized(ev, z.z[0], cfg.v);
        frame_totals(ev, sr.choices, &sr.cost, &sr.credibility);
        sr.y = {sr.cost - con.e_av};
      } else {
        sr = step_maxcs(ev, z.z[0], cfg);
      }
    } else if (mincs) {
      sr = step_mincs(ev, z.z[0], cfg);
    } else {
      sr = step_power_aware(ev, z.z, cfg);
    }

    z = queue_update(z, sr.y);
    for (size_t m = 0; m < sr.y.size(); ++m) trace.y_sum[m] += sr.y[m];
    sum_cost += sr.cost;
    sum_cred += sr.credibility;

    FrameRecord rec;
    rec.k = k;
    rec.choices = std::move(sr.choices);
    rec.cost = sr.cost;
    rec.credibility = sr.credibility;
    rec.z = z.z;
    rec.running_avg_cost = sum_cost / static_cast<double>(k + 1);
    rec.running_avg_cred = sum_cred / static_cast<double>(k + 1);
    trace.max_z1 = std::max(trace.max_z1, z.z[0]);
    trace.frames.push_back(std::move(rec));
  }

  trace.final_z = z.z;
  if (!trace.frames.empty()) {
    trace.avg_cost = sum_cost / static_cast<double>(frames);
    trace.avg_cred = sum_cred / static_cast<double>(frames);
    const std::int64_t from = frames - frames / 4;
    double qc = 0, qr = 0;
    for (std::int64_t k = from; k < frames; ++k) {
      qc += trace.frames[static_cast<size_t>(k)].cost;
      qr += trace.frames[static_cast<size_t>(k)].credibility;
    }
    const double qn = static_cast<double>(frames - from);
    trace.last_quarter_avg_cost = qn > 0 ? qc / qn : 0;
    trace.last_quarter_avg_cred = qn > 0 ? qr / qn : 0;
  }
  return trace;
}

}  // namespace

FrameTrace run(const ControllerConfig& cfg, EventGenerator& events, std::int64_t frames) {
  return run_impl(cfg, [&](std::int64_t) { return events.next(); }, frames);
}

FrameTrace run(const ControllerConfig& cfg, const std::vector<FrameEvent>& events) {
  return run_impl(cfg, [&](std::int64_t k) { return events[static_cast<size_t>(k)]; },
                  static_cast<std::int64_t>(events.size()));
}

EventGenerator::EventGenerator(EventDistribution dist, std::uint64_t seed)
    : dist_(std::move(dist)), rng_(seed) {
  validate(dist_.base);
  base_matrix_ = build_matrix(dist_.base);
  costs_.clear();
  for (const Format& f : dist_.base.formats.all()) costs_.push_back(f.cost);
  const bool needs_alt = dist_.kind == EventDistribution::Kind::TwoPoint ||
                         dist_.kind == EventDistribution::Kind::Markov;
  if (needs_alt) {
    if (!dist_.alt) throw InvariantViolation("event distribution needs an alternate scenario");
    validate(*dist_.alt);
    if (dist_.alt->formats.size() != dist_.base.formats.size() ||
        dist_.alt->reporters.size() != dist_.base.reporters.size())
      throw InvariantViolation("alternate scenario must match the base shape");
    alt_matrix_ = build_matrix(*dist_.alt);
  }
}

FrameEvent EventGenerator::next() {
  FrameEvent ev;
  ev.k = k_++;
  ev.costs = costs_;
  switch (dist_.kind) {
    case EventDistribution::Kind::Deterministic:
      ev.matrix = base_matrix_;
      break;
    case EventDistribution::Kind::TwoPoint:
      ev.matrix = uniform01(rng_) < dist_.p ? base_matrix_ : alt_matrix_;
      break;
    case EventDistribution::Kind::Jitter: {
      Scenario s = dist_.base;
      for (Reporter& rep : s.reporters) {
        const double ang = 2.0 * 3.14159265358979323846 * uniform01(rng_);
        const double rad = dist_.jitter_radius * std::sqrt(uniform01(rng_));
        rep.position.x += rad * std::cos(ang);
        rep.position.y += rad * std::sin(ang);
      }
      ev.matrix = build_matrix(s);
      break;
    }
    case EventDistribution::Kind::Markov: {
      const double u = uniform01(rng_);
      if (in_alt_) {
        if (u >= dist_.stay_alt) in_alt_ = false;
      } else {
        if (u >= dist_.stay_base) in_alt_ = true;
      }
      ev.matrix = in_alt_ ? alt_matrix_ : base_matrix_;
      break;
    }
  }
  ev.duration = dist_.exponential_durations ? exponential(rng_, 1.0) : 1.0;
  return ev;
}

}  // namespace credopt
