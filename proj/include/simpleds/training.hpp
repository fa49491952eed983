#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simpleds/dqn.hpp"
#include "simpleds/observation.hpp"

namespace simpleds {

struct CurvePoint {
  long episode = 0;
  double total_reward = 0.0;
  int turns = 0;
  double epsilon = 0.0;

  bool operator==(const CurvePoint&) const = default;
};

// Everything needed to continue an interrupted run.
struct TrainingState {
  TargetPair pair;
  ReplayBuffer buffer;
  Rng rng;
  long steps = 0;
  long episodes = 0;
  std::vector<CurvePoint> curve;
};

struct TrainingResult {
  TargetPair pair;
  std::vector<CurvePoint> curve;
  long steps = 0;
};

// Raised when the environment fails mid-run; carries the resumable state.
class TrainingInterrupted : public TrainingFault {
 public:
  TrainingInterrupted(const std::string& why, TrainingState state)
      : TrainingFault(why), state_(std::move(state)) {}
  const TrainingState& state() const { return state_; }
  TrainingState take_state() { return std::move(state_); }

 private:
  TrainingState state_;
};

TrainingState initial_training_state(std::size_t state_size, std::size_t num_actions,
                                     const HyperParams& hp, Rng rng);

// Interleaves epsilon-greedy interaction with one train_step per environment
// step. Stops at hp.total_learning_steps steps or hp.max_episodes episodes,
// whichever comes first; an episode in progress at the step limit is cut
// short and not recorded.
TrainingResult run_training(EnvironmentClient& env, const HyperParams& hp, TrainingState state);
TrainingResult run_training(EnvironmentClient& env, const HyperParams& hp, Rng rng);

void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve);
void write_curve_file(const std::string& path, const std::vector<CurvePoint>& curve);

}  // namespace simpleds
