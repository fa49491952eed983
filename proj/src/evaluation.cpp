#include "simpleds/evaluation.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include "simpleds/dqn.hpp"

namespace simpleds {

Chooser greedy_chooser(const QNetwork& net) {
  return [&net](const Observation& obs, const DialogueEnvironment&) {
    return greedy_action(net, obs.state, obs.valid_actions);
  };
}

Chooser expert_chooser() {
  return [](const Observation&, const DialogueEnvironment& env) { return expert_action(env.context()); };
}

EvalReport evaluate(DialogueEnvironment& env, const Chooser& choose, int episodes, int success_turns,
                    const std::function<void(const DialogueEnvironment&)>& on_episode) {
  if (episodes < 0) throw ContractError("episode count must be non-negative");
  EvalReport report;
  report.episodes = episodes;
  if (episodes == 0) return report;
  double reward_sum = 0.0;
  long turns = 0;
  long successes = 0;
  long sets = 0;
  double set_sizes = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (int e = 0; e < episodes; ++e) {
    Observation obs = env.reset();
    while (!obs.terminal) {
      set_sizes += static_cast<double>(obs.valid_actions.size());
      ++sets;
      obs = env.step(choose(obs, env));
      reward_sum += obs.reward;
      lo = std::min(lo, obs.reward);
      hi = std::max(hi, obs.reward);
      ++turns;
    }
    if (task_success(env.context(), success_turns)) ++successes;
    if (on_episode) on_episode(env);
  }
  report.mean_reward = reward_sum / episodes;
  report.success_rate = static_cast<double>(successes) / episodes;
  report.mean_length = static_cast<double>(turns) / episodes;
  report.min_step_reward = turns ? lo : 0.0;
  report.max_step_reward = turns ? hi : 0.0;
  report.mean_valid_set = sets ? set_sizes / static_cast<double>(sets) : 0.0;
  return report;
}

void print_report(std::ostream& out, const EvalReport& r) {
  out << "episodes: " << r.episodes << '\n'
      << "mean_reward: " << r.mean_reward << '\n'
      << "task_success_rate: " << r.success_rate << '\n'
      << "mean_length: " << r.mean_length << '\n';
  if (r.episodes > 0) {
    out << "step_reward_range: [" << r.min_step_reward << ", " << r.max_step_reward << "]\n"
        << "mean_valid_actions: " << r.mean_valid_set << '\n';
  }
}

}  // namespace simpleds
