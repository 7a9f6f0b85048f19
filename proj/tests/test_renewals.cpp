#include <cmath>
#include <cstdint>
#include <vector>

#include <doctest.h>

#include "credopt/errors.hpp"
#include "credopt/renewals.hpp"

using namespace credopt;

namespace {

FrameEvent make_event(std::vector<std::vector<double>> values, std::vector<double> costs) {
  FrameEvent ev;
  ev.matrix.values = std::move(values);
  ev.matrix.distances.assign(ev.matrix.values.size(), 1.0);
  ev.costs = std::move(costs);
  return ev;
}

Scenario ring_scenario(int n, double r0) {
  Scenario s{{},
             FormatSet({{1, 1.0, 2.0, 1.0}, {2, 1.0, 1.0, 3.0}}),
             Event{{0.0, 0.0}, 1.0},
             {},
             CorroborationFn::additive(),
             DistanceTransform::None};
  for (int i = 0; i < n; ++i)
    s.reporters.push_back({i + 1, {r0 + 0.7 * i, 0.0}});
  return s;
}

ControllerConfig maxcs_config(double v, double e_av, double c_min = 0.0) {
  ControllerConfig cfg;
  cfg.v = v;
  cfg.constraint = MaxCSConstraint{e_av, c_min};
  return cfg;
}

EventDistribution make_dist(EventDistribution::Kind kind, Scenario base) {
  return EventDistribution{kind, std::move(base), {}, 0.5, 0.0, 0.9, 0.9, false};
}

}  // namespace

TEST_CASE("queue update clips at zero elementwise") {
  VirtualQueueState z{{1.0, 0.5}};
  auto out = queue_update(z, {-2.0, 0.25});
  CHECK(out.z == std::vector<double>{0.0, 0.75});
  CHECK_THROWS_AS(queue_update(z, {1.0}), InvariantViolation);
}

TEST_CASE("single-reporter bookkeeping follows the queue cycle exactly") {
  // weight z*1 - 0.1*0.5: report at z = 0, idle while the queue drains, so the
  // spend pattern is periodic with average exactly e_av
  std::vector<FrameEvent> frames(8, make_event({{0.5}}, {1.0}));
  for (size_t k = 0; k < frames.size(); ++k) frames[k].k = static_cast<std::int64_t>(k);
  auto trace = run(maxcs_config(0.1, 0.25), frames);

  REQUIRE(trace.frames.size() == 8);
  const std::vector<double> want_cost = {1, 0, 0, 0, 1, 0, 0, 0};
  const std::vector<double> want_z = {0.75, 0.5, 0.25, 0, 0.75, 0.5, 0.25, 0};
  for (size_t k = 0; k < 8; ++k) {
    CHECK(trace.frames[k].k == static_cast<std::int64_t>(k));
    CHECK(trace.frames[k].cost == want_cost[k]);
    CHECK(trace.frames[k].credibility == (want_cost[k] > 0 ? 0.5 : 0.0));
    REQUIRE(trace.frames[k].z.size() == 1);
    CHECK(trace.frames[k].z[0] == want_z[k]);
  }
  CHECK(trace.frames[0].running_avg_cost == 1.0);
  CHECK(trace.frames[3].running_avg_cost == 0.25);
  CHECK(trace.avg_cost == 0.25);
  CHECK(trace.avg_cred == 0.125);
  CHECK(trace.last_quarter_avg_cost == 0.0);  // frames 6 and 7
  CHECK(trace.max_z1 == 0.75);
  CHECK(trace.final_z == std::vector<double>{0.0});
  REQUIRE(trace.y_sum.size() == 1);
  CHECK(trace.y_sum[0] == 0.0);
}

TEST_CASE("cost-constrained control meets the budget on a deterministic stream") {
  EventGenerator gen(make_dist(EventDistribution::Kind::Deterministic, ring_scenario(5, 1.5)), 7);
  auto trace = run(maxcs_config(20.0, 1.0), gen, 2000);
  CHECK(trace.last_quarter_avg_cost <= 1.05 * 1.0);
  CHECK(trace.avg_cost <= 1.05 * 1.0);
  CHECK(trace.avg_cred > 0.0);
  // the clipped queue dominates the plain running sum of arrivals
  for (size_t m = 0; m < trace.y_sum.size(); ++m)
    CHECK(trace.y_sum[m] <= trace.final_z[m]);
}

TEST_CASE("credibility-constrained control delivers the floor on average") {
  EventGenerator gen(make_dist(EventDistribution::Kind::Deterministic, ring_scenario(5, 1.5)), 7);
  ControllerConfig cfg;
  cfg.v = 1.0;
  cfg.constraint = MinCSConstraint{0.8};
  auto trace = run(cfg, gen, 2000);
  CHECK(trace.last_quarter_avg_cred >= 0.95 * 0.8);
  CHECK(trace.avg_cred >= 0.9 * 0.8);
}

TEST_CASE("higher credibility debt never reduces the frame credibility") {
  auto ev = make_event({{0.9, 0.4}, {0.5, 0.2}, {0.25, 0.125}}, {3.0, 1.0});
  ControllerConfig cfg;
  cfg.v = 1.0;
  cfg.constraint = MinCSConstraint{1.0};
  double prev = -1.0;
  for (double z1 : {0.0, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0}) {
    double c = step_mincs(ev, z1, cfg).credibility;
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("decentralized scans replicate the centralized frame solution") {
  EventDistribution dist = make_dist(EventDistribution::Kind::Jitter, ring_scenario(6, 1.2));
  dist.jitter_radius = 0.8;

  EventGenerator a(dist, 12345);
  EventGenerator b(dist, 12345);
  auto central = run(maxcs_config(8.0, 0.7), a, 400);
  ControllerConfig dec = maxcs_config(8.0, 0.7);
  dec.decentralized = true;
  auto local = run(dec, b, 400);

  REQUIRE(central.frames.size() == local.frames.size());
  for (size_t k = 0; k < central.frames.size(); ++k)
    CHECK(central.frames[k].choices == local.frames[k].choices);
  CHECK(central.final_z == local.final_z);
}

TEST_CASE("decentralized mode rejects incompatible constraints") {
  EventGenerator gen(make_dist(EventDistribution::Kind::Deterministic, ring_scenario(3, 1.5)), 1);
  ControllerConfig floor_on = maxcs_config(5.0, 1.0, 0.2);
  floor_on.decentralized = true;
  CHECK_THROWS_AS(run(floor_on, gen, 4), InvariantViolation);

  ControllerConfig power;
  power.constraint = PowerAwareConstraint{{1.0, 1.0, 1.0}, 0.0, 10.0};
  power.decentralized = true;
  CHECK_THROWS_AS(run(power, gen, 4), InvariantViolation);

  ControllerConfig mincs;
  mincs.constraint = MinCSConstraint{0.2};
  mincs.decentralized = true;  // no per-frame floor, so the scan decomposes
  CHECK_NOTHROW(run(mincs, gen, 4));
}

TEST_CASE("per-frame credibility floor is honored or rejected") {
  auto ev = make_event({{0.5, 0.25}, {0.4, 0.2}}, {2.0, 1.0});
  auto cfg = maxcs_config(1.0, 0.5, 0.6);
  for (double z1 : {0.0, 3.0, 50.0}) {
    auto sr = step_maxcs(ev, z1, cfg);
    CHECK(sr.credibility >= 0.6 - 1e-12);
  }
  auto too_high = maxcs_config(1.0, 0.5, 1.0);  // best reachable is 0.9
  CHECK_THROWS_AS(step_maxcs(ev, 0.0, too_high), InfeasibleFrame);

  auto ann = maxcs_config(1.0, 0.5, 0.3);
  ann.frame_solver = ControllerConfig::FrameSolver::Ann;
  auto sr = step_maxcs(ev, 0.0, ann);
  CHECK(sr.credibility >= 0.3 - 1e-12);
}

TEST_CASE("power-aware frames respect bandwidth, floor and power queues") {
  FrameEvent ev = make_event({{0.5, 0.9}, {0.4, 0.7}, {0.3, 0.6}}, {1.0, 2.0});
  ev.bandwidth = {1.0, 2.0};
  ev.power = {{0.2, 0.8}, {0.3, 0.9}, {0.4, 1.0}};

  ControllerConfig cfg;
  cfg.v = 5.0;
  cfg.constraint = PowerAwareConstraint{{0.5, 0.5, 0.5}, 0.8, 3.0};

  auto sr = step_power_aware(ev, {0.0, 0.0, 0.0}, cfg);
  double band = 0.0, cred = 0.0;
  for (size_t i = 0; i < sr.choices.size(); ++i) {
    if (sr.choices[i] == 0) continue;
    band += ev.bandwidth[static_cast<size_t>(sr.choices[i]) - 1];
    cred += ev.matrix.values[i][static_cast<size_t>(sr.choices[i]) - 1];
  }
  CHECK(band <= 3.0 + 1e-12);
  CHECK(cred >= 0.8 - 1e-12);
  REQUIRE(sr.y.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    const int j = sr.choices[i];
    const double p = j == 0 ? 0.0 : ev.power[i][static_cast<size_t>(j) - 1];
    CHECK(sr.y[i] == p - 0.5 * ev.duration);
  }

  // floor beyond the total reachable credibility
  ControllerConfig impossible;
  impossible.v = 5.0;
  impossible.constraint = PowerAwareConstraint{{0.5, 0.5, 0.5}, 3.0, 10.0};
  CHECK_THROWS_AS(step_power_aware(ev, {0.0, 0.0, 0.0}, impossible), InfeasibleFrame);

  // bandwidth cap too small to carry the floor
  ControllerConfig squeezed;
  squeezed.v = 5.0;
  squeezed.constraint = PowerAwareConstraint{{0.5, 0.5, 0.5}, 2.0, 0.5};
  CHECK_THROWS_AS(step_power_aware(ev, {0.0, 0.0, 0.0}, squeezed), InfeasibleFrame);

  std::vector<FrameEvent> frames(6, ev);
  auto trace = run(cfg, frames);
  REQUIRE(trace.final_z.size() == 3);  // one power queue per reporter
  for (size_t m = 0; m < 3; ++m) CHECK(trace.y_sum[m] <= trace.final_z[m]);
  CHECK_THROWS_AS(step_power_aware(ev, {0.0, 0.0}, cfg), InvariantViolation);
}

TEST_CASE("event streams are reproducible per seed") {
  EventDistribution dist = make_dist(EventDistribution::Kind::Jitter, ring_scenario(4, 2.0));
  dist.jitter_radius = 1.0;

  EventGenerator a(dist, 99), b(dist, 99), c(dist, 100);
  bool saw_difference = false;
  for (int k = 0; k < 10; ++k) {
    auto ea = a.next(), eb = b.next(), ec = c.next();
    CHECK(ea.matrix.values == eb.matrix.values);
    CHECK(ea.matrix.distances == eb.matrix.distances);
    if (ea.matrix.values != ec.matrix.values) saw_difference = true;
  }
  CHECK(saw_difference);
}

TEST_CASE("two-point and markov streams switch between the two scenarios") {
  EventDistribution dist = make_dist(EventDistribution::Kind::TwoPoint, ring_scenario(4, 2.0));
  dist.alt = ring_scenario(4, 2.0);
  dist.alt->event.location = {1.3, -0.4};
  dist.p = 0.6;

  EventGenerator gen(dist, 4242);
  auto base_matrix = build_matrix(dist.base);
  auto alt_matrix = build_matrix(*dist.alt);
  int base_hits = 0, alt_hits = 0;
  for (int k = 0; k < 300; ++k) {
    auto ev = gen.next();
    if (ev.matrix.values == base_matrix.values)
      ++base_hits;
    else if (ev.matrix.values == alt_matrix.values)
      ++alt_hits;
  }
  CHECK(base_hits + alt_hits == 300);
  CHECK(base_hits > 140);  // p = 0.6 of 300
  CHECK(alt_hits > 70);

  dist.kind = EventDistribution::Kind::Markov;
  dist.stay_base = 0.7;
  dist.stay_alt = 0.6;
  EventGenerator markov(dist, 777);
  alt_hits = 0;
  for (int k = 0; k < 300; ++k)
    if (markov.next().matrix.values == alt_matrix.values) ++alt_hits;
  CHECK(alt_hits > 50);
  CHECK(alt_hits < 250);

  dist.alt.reset();
  CHECK_THROWS_AS(EventGenerator(dist, 1), InvariantViolation);
  dist.alt = ring_scenario(5, 2.0);  // reporter count differs from the base
  CHECK_THROWS_AS(EventGenerator(dist, 1), InvariantViolation);
}

TEST_CASE("exponential frame durations average to one") {
  EventDistribution dist = make_dist(EventDistribution::Kind::Deterministic, ring_scenario(2, 2.0));
  dist.exponential_durations = true;
  EventGenerator gen(dist, 31337);
  double sum = 0.0;
  const int k = 10000;
  for (int i = 0; i < k; ++i) sum += gen.next().duration;
  CHECK(sum / k == doctest::Approx(1.0).epsilon(0.05));
}
