#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "simpleds/qnetwork.hpp"
#include "simpleds/random.hpp"
#include "simpleds/replay_buffer.hpp"

namespace simpleds {

struct HyperParams {
  double gamma = 0.7;
  double epsilon_start = 1.0;
  double epsilon_min = 0.01;
  long epsilon_anneal_steps = 10000;
  std::size_t batch_size = 32;
  long total_learning_steps = 20000;
  long max_episodes = 3000;
  std::size_t replay_capacity = 10000;
  long target_sync_period = 1000;
  double learning_rate = 0.005;
  std::size_t replay_warmup = 500;

  // Throws ContractError naming the first offending field.
  void validate() const;
};

// Linear annealing from epsilon_start to epsilon_min over epsilon_anneal_steps.
double epsilon_at(const HyperParams& hp, long step);

// Online parameters plus the frozen copy used in bootstrap targets.
struct TargetPair {
  QNetwork online;
  QNetwork target;
  long steps_since_sync = 0;

  explicit TargetPair(QNetwork net) : online(net), target(std::move(net)) {}

  void sync() {
    target = online;
    steps_since_sync = 0;
  }
};

// Epsilon-greedy over the valid set; the greedy branch breaks ties towards
// the lowest action index.
int select_action(const TargetPair& pair, std::span<const double> state,
                  std::span<const int> valid, double epsilon, Rng& rng);

int greedy_action(const QNetwork& net, std::span<const double> state, std::span<const int> valid);

double td_target(const TargetPair& pair, const Experience& e, double gamma);

// One minibatch Q-learning update. Returns the batch's mean squared TD error
// measured before the update, or nullopt while the buffer is below warmup.
std::optional<double> train_step(TargetPair& pair, const ReplayBuffer& buffer,
                                 const HyperParams& hp, Rng& rng);

}  // namespace simpleds
