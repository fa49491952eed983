#include "simpleds/training.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "simpleds/dialogue_act.hpp"
#include "simpleds/errors.hpp"

namespace simpleds {

TrainingState initial_training_state(std::size_t state_size, std::size_t num_actions,
                                     const HyperParams& hp, Rng rng) {
  QNetwork net = QNetwork::random(default_layer_dims(state_size, num_actions), rng);
  return TrainingState{TargetPair(std::move(net)), ReplayBuffer(hp.replay_capacity), std::move(rng), 0, 0, {}};
}

namespace {

template <typename Call>
Observation guarded(Call&& call, TrainingState& state) {
  try {
    return call();
  } catch (const TransportError& e) {
    throw TrainingInterrupted(std::string("environment failure: ") + e.what(), std::move(state));
  }
}

}  // namespace

TrainingResult run_training(EnvironmentClient& env, const HyperParams& hp, TrainingState state) {
  hp.validate();
  while (state.steps < hp.total_learning_steps && state.episodes < hp.max_episodes) {
    Observation obs = guarded([&] { return env.reset(); }, state);
    double total = 0.0;
    int turns = 0;
    bool cut = false;
    while (!obs.terminal) {
      if (state.steps >= hp.total_learning_steps) {
        cut = true;
        break;
      }
      const double epsilon = epsilon_at(hp, state.steps);
      const int action = select_action(state.pair, obs.state, obs.valid_actions, epsilon, state.rng);
      Observation next = guarded([&] { return env.step(action); }, state);
      state.buffer.push(Experience{obs.state, action, next.reward, next.state, next.terminal,
                                   next.valid_actions});
      train_step(state.pair, state.buffer, hp, state.rng);
      ++state.steps;
      ++turns;
      total += next.reward;
      obs = std::move(next);
    }
    if (cut) break;
    ++state.episodes;
    state.curve.push_back(CurvePoint{state.episodes - 1, total, turns, epsilon_at(hp, state.steps)});
  }
  return TrainingResult{std::move(state.pair), std::move(state.curve), state.steps};
}

TrainingResult run_training(EnvironmentClient& env, const HyperParams& hp, Rng rng) {
  return run_training(env, hp, initial_training_state(env.state_size(), kNumActions, hp, std::move(rng)));
}

void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve) {
  out << "episode_index,total_reward,turns,epsilon\n";
  const auto old = out.precision(17);
  for (const CurvePoint& p : curve) {
    out << p.episode << ',' << p.total_reward << ',' << p.turns << ',' << p.epsilon << '\n';
  }
  out.precision(old);
}

void write_curve_file(const std::string& path, const std::vector<CurvePoint>& curve) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_curve(out, curve);
}

}  // namespace simpleds
