#pragma once

#include <span>
#include <vector>

#include "simpleds/dialogue_context.hpp"
#include "simpleds/naive_bayes.hpp"

namespace simpleds {

struct ConstraintConfig {
  double probability_threshold = 0.01;
  // Slots filled from words with mean confidence below this may be apologised for.
  double apology_threshold = 0.5;
  double binarisation_threshold = 0.0;
};

// Heuristically legitimate acts given what has been filled, confirmed,
// retrieved and provided so far. Sorted by index.
std::vector<int> legitimate_actions(const DialogueContext& context, const ConstraintConfig& config);

// Actions whose posterior strictly exceeds the threshold. Sorted by index.
std::vector<int> probable_actions(std::span<const double> posterior, double threshold);

struct ConstrainedSet {
  std::vector<int> actions;  // sorted, never empty
  bool anomaly = false;      // nothing probable or legitimate; full catalog used
};

ConstrainedSet constrained_set(std::span<const double> posterior, const DialogueContext& context,
                               const ConstraintConfig& config);
ConstrainedSet constrained_set(const NaiveBayesModel& model, std::span<const double> state,
                               const DialogueContext& context, const ConstraintConfig& config);

}  // namespace simpleds
