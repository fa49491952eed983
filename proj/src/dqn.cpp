#include "simpleds/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "simpleds/errors.hpp"

namespace simpleds {

void HyperParams::validate() const {
  auto fail = [](const std::string& field) {
    throw ContractError("invalid hyperparameter: " + field);
  };
  if (!(gamma >= 0.0 && gamma < 1.0)) fail("gamma must be in [0,1)");
  if (!(epsilon_min >= 0.0 && epsilon_min <= epsilon_start && epsilon_start <= 1.0)) {
    fail("need 0 <= epsilon_min <= epsilon_start <= 1");
  }
  if (epsilon_anneal_steps < 0) fail("epsilon_anneal_steps must be >= 0");
  if (batch_size < 1) fail("batch_size must be >= 1");
  if (target_sync_period < 1) fail("target_sync_period must be >= 1");
  if (replay_capacity < 1) fail("replay_capacity must be >= 1");
  if (!(learning_rate >= 0.0)) fail("learning_rate must be >= 0");
  if (total_learning_steps < 0) fail("total_learning_steps must be >= 0");
  if (max_episodes < 0) fail("max_episodes must be >= 0");
}

double epsilon_at(const HyperParams& hp, long step) {
  if (step <= 0) return hp.epsilon_start;
  if (step >= hp.epsilon_anneal_steps) return hp.epsilon_min;
  const double frac = static_cast<double>(step) / static_cast<double>(hp.epsilon_anneal_steps);
  return hp.epsilon_start + frac * (hp.epsilon_min - hp.epsilon_start);
}

int greedy_action(const QNetwork& net, std::span<const double> state, std::span<const int> valid) {
  if (valid.empty()) throw ContractError("select_action: empty valid action set");
  const std::vector<double> q = net.forward(state);
  int best = -1;
  for (int a : valid) {
    if (a < 0 || static_cast<std::size_t>(a) >= q.size()) {
      throw ContractError("select_action: action " + std::to_string(a) + " outside the catalog");
    }
    if (best < 0 || q[a] > q[best] || (q[a] == q[best] && a < best)) best = a;
  }
  return best;
}

int select_action(const TargetPair& pair, std::span<const double> state,
                  std::span<const int> valid, double epsilon, Rng& rng) {
  if (valid.empty()) throw ContractError("select_action: empty valid action set");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ContractError("select_action: epsilon outside [0,1]");
  if (uniform01(rng) < epsilon) return valid[uniform_index(rng, valid.size())];
  return greedy_action(pair.online, state, valid);
}

double td_target(const TargetPair& pair, const Experience& e, double gamma) {
  if (e.terminal) return e.reward;
  if (e.valid_next.empty()) throw ContractError("td_target: non-terminal experience without valid_next");
  const std::vector<double> q = pair.target.forward(e.next_state);
  double best = -std::numeric_limits<double>::infinity();
  for (int a : e.valid_next) best = std::max(best, q.at(static_cast<std::size_t>(a)));
  return e.reward + gamma * best;
}

std::optional<double> train_step(TargetPair& pair, const ReplayBuffer& buffer,
                                 const HyperParams& hp, Rng& rng) {
  if (buffer.size() < std::max<std::size_t>(hp.replay_warmup, 1)) return std::nullopt;

  Gradient total = pair.online.zero_gradient();
  double loss = 0.0;
  for (std::size_t b = 0; b < hp.batch_size; ++b) {
    const Experience& e = buffer.slot(buffer.sample_index(rng));
    const double target = td_target(pair, e, hp.gamma);
    const double q = pair.online.forward(e.state)[static_cast<std::size_t>(e.action)];
    loss += (q - target) * (q - target);
    total += pair.online.backward(e.state, static_cast<std::size_t>(e.action), target);
  }
  const double scale = 1.0 / static_cast<double>(hp.batch_size);
  total *= scale;
  pair.online.apply_sgd(total, hp.learning_rate);

  if (++pair.steps_since_sync >= hp.target_sync_period) pair.sync();
  return loss * scale;
}

}  // namespace simpleds
