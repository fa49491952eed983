#pragma once

#include <optional>
#include <string>
#include <vector>

#include "simpleds/dialogue_act.hpp"
#include "simpleds/random.hpp"
#include "simpleds/restaurant_db.hpp"
#include "simpleds/templates.hpp"
#include "simpleds/text.hpp"

namespace simpleds {

struct UserGoal {
  std::string food;
  std::string price;
  std::string area;

  const std::string& value(Slot slot) const;
  Bindings bindings() const;
  bool operator==(const UserGoal&) const = default;
};

// Each slot drawn uniformly from the DB's distinct values for that column.
UserGoal sample_goal(const RestaurantDb& db, Rng& rng);

struct NoiseConfig {
  double distortion_threshold = 0.5;
  bool enabled = true;

  void validate() const;
};

// Response templates of the simulated user.
class SimulatorRules {
 public:
  SimulatorRules() = default;
  static SimulatorRules from_file(const KeyedTextFile& file, const std::string& source_name);

  // Answer supplying the given slots; an empty set means "how may I help you".
  const std::string& answer(SlotSet slots) const;
  const std::string& affirm() const { return affirm_; }
  const std::string& negate() const { return negate_; }
  const std::string& decline() const { return decline_; }
  std::vector<std::string> all_texts() const;

 private:
  std::string hmihy_;
  std::array<std::string, 8> by_slots_;  // indexed by SlotSet bits
  std::string affirm_;
  std::string negate_;
  std::string decline_;
};

struct SimulatorConfig {
  // Probability of answering "no" to AskFor(more); otherwise a new task starts.
  double p_end = 1.0;
};

struct UserResponse {
  Tokens words;
  std::optional<UserGoal> new_goal;
};

// Deterministic rule response of a user with `goal` to the system act.
// `system_values` holds what the system believes each slot to be (used by
// explicit confirmations). AskFor(more) draws from rng to decide whether to
// end; a continuing user samples a fresh goal from db.
UserResponse respond(const SimulatorRules& rules, const UserGoal& goal, int action,
                     const Bindings& system_values, const SimulatorConfig& config,
                     const RestaurantDb& db, Rng& rng);

// Assigns every word a Uniform[0,1) confidence; with noise enabled, words
// scoring below the threshold become a different vocabulary word drawn
// uniformly (the low score is kept).
ScoredUtterance distort(const Tokens& words, const NoiseConfig& noise, const Vocabulary& vocab, Rng& rng);

// Human input: every word gets the fixed confidence, nothing is distorted.
ScoredUtterance score_uniformly(const Tokens& words, double confidence);

}  // namespace simpleds
