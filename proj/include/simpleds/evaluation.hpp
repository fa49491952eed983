#pragma once

#include <functional>
#include <iosfwd>

#include "simpleds/environment.hpp"
#include "simpleds/qnetwork.hpp"

namespace simpleds {

struct EvalReport {
  int episodes = 0;
  double mean_reward = 0.0;
  double success_rate = 0.0;
  double mean_length = 0.0;
  double min_step_reward = 0.0;
  double max_step_reward = 0.0;
  double mean_valid_set = 0.0;  // over non-terminal observations
};

// Picks the next action from the current observation and environment.
using Chooser = std::function<int(const Observation&, const DialogueEnvironment&)>;

Chooser greedy_chooser(const QNetwork& net);
Chooser expert_chooser();

// Runs complete episodes. Success uses task_success with success_turns.
// on_episode sees the environment after each finished episode.
EvalReport evaluate(DialogueEnvironment& env, const Chooser& choose, int episodes, int success_turns = 15,
                    const std::function<void(const DialogueEnvironment&)>& on_episode = {});

void print_report(std::ostream& out, const EvalReport& report);

}  // namespace simpleds
