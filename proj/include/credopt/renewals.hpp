#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "credopt/model.hpp"
#include "credopt/rng.hpp"
#include "credopt/solve_dp.hpp"

namespace credopt {

struct FrameEvent {
  std::int64_t k = 0;
  CredibilityMatrix matrix;                // realized credibility per reporter/format
  std::vector<double> costs;               // per-format report cost this frame
  double duration = 1.0;                   // frame length T[k]
  std::vector<std::vector<double>> power;  // per reporter/format; empty = costs
  std::vector<double> bandwidth;           // per format; empty = costs
};

struct VirtualQueueState {
  std::vector<double> z;
};

// Elementwise max(z + y, 0).
VirtualQueueState queue_update(const VirtualQueueState& z, const std::vector<double>& y);

struct MaxCSConstraint {
  double e_av = 0.0;   // time-average cost ceiling
  double c_min = 0.0;  // per-frame credibility floor
};

struct MinCSConstraint {
  double c_av = 0.0;  // time-average credibility floor
};

struct PowerAwareConstraint {
  std::vector<double> p_av;  // per-reporter average power ceiling
  double c_min = 0.0;
  double b_max = 0.0;
};

struct ControllerConfig {
  double v = 1.0;
  std::variant<MaxCSConstraint, MinCSConstraint, PowerAwareConstraint> constraint;
  bool decentralized = false;  // valid only when the per-frame floor is off
  enum class FrameSolver { Dp, Ann } frame_solver = FrameSolver::Dp;
};

struct StepResult {
  std::vector<int> choices;
  double cost = 0.0;
  double credibility = 0.0;
  std::vector<double> y;  // queued attributes for this frame
};

// Per-frame drift-plus-penalty minimization with weights z1*e_j - v*c_ij,
// subject to the optional credibility floor. Throws InfeasibleFrame when the
// floor is unreachable for this frame's realization.
StepResult step_maxcs(const FrameEvent& ev, double z1, const ControllerConfig& cfg);

// Per-reporter independent argmin over idle + formats; idle wins ties at
// weight zero, format ties go to the lowest index. Identical to step_maxcs
// with the floor off.
std::vector<int> step_decentralized(const FrameEvent& ev, double z1, double v);

StepResult step_mincs(const FrameEvent& ev, double z1, const ControllerConfig& cfg);

// Weighted credibility maximization under a per-frame credibility floor and
// bandwidth cap, with per-reporter power queues.
StepResult step_power_aware(const FrameEvent& ev, const std::vector<double>& z,
                            const ControllerConfig& cfg);

struct FrameRecord {
  std::int64_t k = 0;
  std::vector<int> choices;
  double cost = 0.0;
  double credibility = 0.0;
  std::vector<double> z;  // after this frame's update
  double running_avg_cost = 0.0;
  double running_avg_cred = 0.0;
};

struct FrameTrace {
  std::vector<FrameRecord> frames;
  std::vector<double> y_sum;  // per queued attribute
  std::vector<double> final_z;
  double avg_cost = 0.0, avg_cred = 0.0;
  double last_quarter_avg_cost = 0.0, last_quarter_avg_cred = 0.0;
  double max_z1 = 0.0;
};

struct EventDistribution {
  enum class Kind { Deterministic, TwoPoint, Jitter, Markov } kind = Kind::Deterministic;
  Scenario base;
  std::optional<Scenario> alt;  // second point / second Markov state
  double p = 0.5;               // probability of `base` per frame (TwoPoint)
  double jitter_radius = 0.0;   // uniform disc jitter around each reporter (Jitter)
  double stay_base = 0.9;       // Markov self-transition probabilities
  double stay_alt = 0.9;
  bool exponential_durations = false;  // T[k] ~ Exp(1) instead of 1
};

// Deterministic stream for a given seed; matrices come from build_matrix.
class EventGenerator {
 public:
  EventGenerator(EventDistribution dist, std::uint64_t seed);
  FrameEvent next();

 private:
  EventDistribution dist_;
  Rng rng_;
  std::int64_t k_ = 0;
  bool in_alt_ = false;
  CredibilityMatrix base_matrix_, alt_matrix_;
  std::vector<double> costs_;
};

FrameTrace run(const ControllerConfig& cfg, EventGenerator& events, std::int64_t frames);
FrameTrace run(const ControllerConfig& cfg, const std::vector<FrameEvent>& events);

}  // namespace credopt
