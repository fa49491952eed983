#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "simpleds/action_constraints.hpp"
#include "simpleds/data_pack.hpp"
#include "simpleds/dialogue_context.hpp"
#include "simpleds/errors.hpp"
#include "simpleds/observation.hpp"
#include "simpleds/random.hpp"
#include "simpleds/reward.hpp"
#include "simpleds/user_simulator.hpp"

namespace simpleds {

struct EnvironmentConfig {
  RewardConfig reward;
  ConstraintConfig constraints;
  NoiseConfig noise;
  SimulatorConfig simulator;
  int max_turns = 30;
  double human_confidence = 1.0;

  void validate() const;
};

// Reason codes double as the wire protocol's error reasons.
class EpisodeError : public ContractError {
 public:
  EpisodeError(std::string reason, const std::string& what)
      : ContractError(what), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

// One transcript row: the state the action was chosen in, the
// act, its verbalisation and the (distorted) user reply.
struct TranscriptRow {
  StateVector state;
  int action = 0;
  std::string system_text;
  std::string user_text;
  double reward = 0.0;
};

struct PendingTurn {
  int action = 0;
  Tokens system_words;
  bool expects_user = false;
};

// The learning environment: verbalise the action, obtain a user reply,
// distort it, update the dialogue context, featurize and reward.
class DialogueEnvironment {
 public:
  DialogueEnvironment(std::shared_ptr<const DataPack> data, EnvironmentConfig config, Rng rng);

  // Fresh goal (sampled unless given) and context; state is the zero vector.
  Observation reset(std::optional<UserGoal> goal = std::nullopt);

  // Full transition with the simulated user.
  Observation step(int action);

  // Two-phase transition for a human user: begin_turn runs the system side,
  // finish_turn consumes the user's words (empty when the act expects none).
  PendingTurn begin_turn(int action);
  Observation finish_turn(const ScoredUtterance& user);
  Observation finish_turn_with_text(const std::string& text);
  bool turn_pending() const { return pending_.has_value(); }
  // Ends the episode without a reward (e.g. a human who stopped answering).
  void abort();

  bool started() const { return started_; }
  bool terminal() const { return context_.terminal; }
  const DialogueContext& context() const { return context_; }
  const UserGoal& goal() const { return goal_; }
  const StateVector& state() const { return state_; }
  const std::vector<int>& valid_actions() const { return valid_; }
  const std::vector<double>& posterior() const { return posterior_; }
  bool last_set_anomalous() const { return anomaly_; }
  const DataPack& data() const { return *data_; }
  const EnvironmentConfig& config() const { return config_; }
  const std::vector<TranscriptRow>& transcript() const { return transcript_; }
  Observation observation() const { return last_; }

 private:
  void advertise();
  void apply_user_turn(int action, const ScoredUtterance& user);

  std::shared_ptr<const DataPack> data_;
  EnvironmentConfig config_;
  Rng rng_;
  UserGoal goal_;
  DialogueContext context_;
  StateVector state_;
  std::vector<double> posterior_;
  std::vector<int> valid_;
  bool anomaly_ = false;
  bool started_ = false;
  struct Pending {
    PendingTurn turn;
    double dr = 1.0;
    StateVector state_before;
  };
  std::optional<Pending> pending_;
  Observation last_;
  std::vector<TranscriptRow> transcript_;
  // (value tokens, slot, value), longest first
  std::vector<std::tuple<Tokens, Slot, std::string>> lexicon_;
};

// All slots confirmed, information provided and the dialogue closed within
// max_turns system turns.
bool task_success(const DialogueContext& context, int max_turns = 15);

// The hand-written demonstration policy: greet, request what is missing,
// implicitly confirm what was heard, retrieve, provide, ask for more, close.
int expert_action(const DialogueContext& context);

// Runs the expert through an environment and records (state, action) pairs.
// on_episode sees the environment after each finished dialogue.
DemonstrationCorpus generate_demonstrations(
    std::shared_ptr<const DataPack> data, const EnvironmentConfig& config, int dialogues, Rng rng,
    const std::function<void(const DialogueEnvironment&)>& on_episode = {});

// Renders "state<TAB>act<TAB>verbalisation<TAB>[user]" lines plus the final state.
std::string format_transcript(const std::vector<TranscriptRow>& rows, const StateVector& final_state);
std::string format_state(const StateVector& state);

// EnvironmentClient that calls a DialogueEnvironment directly.
class LocalEnvironment : public EnvironmentClient {
 public:
  explicit LocalEnvironment(DialogueEnvironment env) : env_(std::move(env)) {}
  std::size_t state_size() const override { return env_.data().vocab.size(); }
  std::vector<std::string> vocabulary() const override { return env_.data().vocab.words(); }
  Observation reset() override { return env_.reset(); }
  Observation step(int action) override { return env_.step(action); }
  DialogueEnvironment& env() { return env_; }

 private:
  DialogueEnvironment env_;
};

}  // namespace simpleds
